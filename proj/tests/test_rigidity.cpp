// Copyright 2026 The flagmetric Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "flagmetric/rigidity.hpp"

namespace fm = flagmetric;

namespace {

fm::ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const fm::Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an exception";
  return fm::ErrorCode::ValidationError;
}

Eigen::MatrixXd span_of(std::initializer_list<int> axes, int n) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(axes.size()));
  int c = 0;
  for (int a : axes) m(a, c++) = 1.0;
  return m;
}

Eigen::MatrixXd random_orthogonal(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = g(rng);
  return Eigen::HouseholderQR<Eigen::MatrixXd>(m).householderQ();
}

}  // namespace

TEST(FiberEscape, LineInThreeSpace) {
  const auto ref = fm::FlagDomainSpec::standard(3, {1, 2}, {1.0, 1.0}).reference;
  const auto base = fm::GrassmannPoint::canonicalize(span_of({0}, 3));
  const fm::EscapeWitness w = fm::fiber_escape_witness(3, {1, 2}, 1, base, ref);
  EXPECT_EQ(w.violated_dim, 2);
  EXPECT_TRUE(fm::same_subspace(fm::flag_project(w.flag, 2), fm::GrassmannPoint::canonicalize(span_of({0, 2}, 3))));
  EXPECT_FALSE(fm::flag_transverse(w.flag, ref));
  EXPECT_LT(w.pairing, 1e-10);
}

TEST(FiberEscape, LineInFourSpace) {
  const auto ref = fm::FlagDomainSpec::standard(4, {1, 2}, {1.0, 1.0}).reference;
  const auto base = fm::GrassmannPoint::canonicalize(span_of({0}, 4));
  const fm::EscapeWitness w = fm::fiber_escape_witness(4, {1, 2}, 1, base, ref);
  EXPECT_TRUE(fm::same_subspace(fm::flag_project(w.flag, 2), fm::GrassmannPoint::canonicalize(span_of({0, 3}, 4))));
  EXPECT_LT(w.pairing, 1e-10);
}

TEST(FiberEscape, RandomConfigurationsAlwaysHaveAWitness) {
  std::mt19937_64 rng(9);
  const std::vector<std::pair<int, std::vector<int>>> spaces{
      {3, {1, 2}}, {4, {1, 2}}, {4, {1, 3}}, {4, {2, 3}}, {4, {1, 2, 3}}, {5, {1, 3}}, {5, {2, 4}}, {5, {1, 2, 4}}};
  int found = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto& [n, dims] = spaces[trial % spaces.size()];
    const int d = dims[trial % dims.size()];
    const auto base = fm::random_grassmann(n, d, rng);
    const auto ref = fm::FullFlag::from_basis(random_orthogonal(n, rng), fm::detail::complementary_dims(n, dims));
    const fm::EscapeWitness w = fm::fiber_escape_witness(n, dims, d, base, ref);
    EXPECT_TRUE(fm::same_subspace(fm::flag_project(w.flag, d), base));
    found += w.pairing < 1e-10;
  }
  EXPECT_EQ(found, 100);
}

TEST(FiberEscape, SingleLevelHasNoFiber) {
  const auto base = fm::GrassmannPoint::canonicalize(span_of({0}, 3));
  const auto ref = fm::FullFlag::from_basis(Eigen::MatrixXd::Identity(3, 3).rowwise().reverse(), {2});
  EXPECT_EQ(code_of([&] { fm::fiber_escape_witness(3, {1}, 1, base, ref); }), fm::ErrorCode::InvalidDimension);
}

TEST(FiberEscape, RejectsMismatchedInputs) {
  const auto ref = fm::FlagDomainSpec::standard(4, {1, 2}, {1.0, 1.0}).reference;
  const auto base = fm::GrassmannPoint::canonicalize(span_of({0}, 4));
  EXPECT_EQ(code_of([&] { fm::fiber_escape_witness(4, {1, 2}, 3, base, ref); }), fm::ErrorCode::InvalidDimension);
  // a reference with the same dims rather than the complementary ones
  const auto same = fm::FullFlag::from_basis(Eigen::MatrixXd::Identity(4, 4), {1, 2});
  EXPECT_EQ(code_of([&] { fm::fiber_escape_witness(4, {1, 2}, 1, base, same); }), fm::ErrorCode::DimensionMismatch);
}

TEST(FlagDomainSpec, StandardFlagIsTheCentre) {
  const auto spec = fm::FlagDomainSpec::standard(4, {1, 2}, {0.5, 0.7});
  const auto f = fm::FullFlag::from_basis(Eigen::MatrixXd::Identity(4, 4), {1, 2});
  const auto m = spec.margins(f);
  EXPECT_NEAR(m[0], 0.5, 1e-15);
  EXPECT_NEAR(m[1], 0.7, 1e-15);
  EXPECT_TRUE(spec.contains(f));
  EXPECT_EQ(code_of([] { fm::FlagDomainSpec::standard(4, {1, 2}, {0.5}); }), fm::ErrorCode::DimensionMismatch);
  EXPECT_EQ(code_of([] { fm::FlagDomainSpec::standard(4, {1, 2}, {0.5, -1.0}); }), fm::ErrorCode::ValidationError);
}

TEST(FlagDomainSpec, ChartCoordinateOfATiltedLine) {
  // line through (1, a, 0, 0) has graph coordinate a over the complement of
  // the reference hyperplane span(e2, e3, e4)
  const auto spec = fm::FlagDomainSpec::standard(4, {1, 2}, {1.0, 1.0});
  const auto v = fm::projective_point(Eigen::Vector4d(1, 0.3, 0, 0));
  EXPECT_NEAR(Eigen::JacobiSVD<Eigen::MatrixXd>(spec.chart_coordinates(v)).singularValues()(0), 0.3, 1e-14);
  EXPECT_FALSE(spec.chart_coordinates(fm::projective_point(Eigen::Vector4d(0, 1, 0, 0))).allFinite());
}

TEST(FiberDemo, MarginsDecreaseToZeroWithFixedProjection) {
  for (double r : {0.5, 0.1}) {
    const auto spec = fm::FlagDomainSpec::standard(4, {1, 2}, {r, r});
    const auto f0 = fm::FullFlag::from_basis(Eigen::MatrixXd::Identity(4, 4), {1, 2});
    const fm::FiberDemo demo = fm::fiber_boundary_demo(spec, f0, 40);
    ASSERT_EQ(demo.flags.size(), 41u);
    // exit where the rotated plane's graph coordinate tan s reaches r
    EXPECT_NEAR(demo.exit_parameter, std::atan(r), 1e-12);
    for (std::size_t k = 1; k < demo.margin.size(); ++k) {
      EXPECT_LT(demo.margin[k], demo.margin[k - 1]);
      EXPECT_GT(demo.margin[k], -1e-15);
      EXPECT_LT(demo.projection_drift[k], 1e-12);
    }
    EXPECT_LT(demo.margin.back(), 1e-6);
    EXPECT_LT(demo.distance_to_limit.back(), 1e-6);
  }
}

TEST(FiberDemo, FixingTheTopLevelMovesTheLevelBelow) {
  const auto spec = fm::FlagDomainSpec::standard(4, {1, 2}, {0.5, 0.5});
  const auto f0 = fm::FullFlag::from_basis(Eigen::MatrixXd::Identity(4, 4), {1, 2});
  const fm::FiberDemo demo = fm::fiber_boundary_demo(spec, f0, 30, 2);
  EXPECT_EQ(demo.fixed_dim, 2);
  EXPECT_LT(demo.margin.back(), 1e-6);
  for (double drift : demo.projection_drift) EXPECT_LT(drift, 1e-12);
}

TEST(FiberDemo, ZeroStepsAndInvalidStarts) {
  const auto spec = fm::FlagDomainSpec::standard(3, {1, 2}, {0.5, 0.5});
  const auto f0 = fm::FullFlag::from_basis(Eigen::MatrixXd::Identity(3, 3), {1, 2});
  EXPECT_EQ(fm::fiber_boundary_demo(spec, f0, 0).flags.size(), 1u);
  EXPECT_EQ(code_of([&] { fm::fiber_boundary_demo(spec, f0, -1); }), fm::ErrorCode::ValidationError);
  const auto outside = fm::FullFlag::from_basis(Eigen::MatrixXd::Identity(3, 3).rowwise().reverse(), {1, 2});
  EXPECT_EQ(code_of([&] { fm::fiber_boundary_demo(spec, outside, 5); }), fm::ErrorCode::FiberExitsImmediately);
}

TEST(OppositeDensity, GenericPairsAreOpposite) {
  for (auto [n, p] : {std::pair{3, 1}, std::pair{4, 2}, std::pair{5, 2}})
    EXPECT_EQ(fm::opposite_density_check(n, p, 2000, 1), 1.0);
  EXPECT_EQ(fm::opposite_density_check(3, 1, 1, 0), 1.0);
  // a threshold above every pairing counts nothing
  EXPECT_EQ(fm::opposite_density_check(3, 1, 100, 0, 2.0), 0.0);
  EXPECT_EQ(code_of([] { fm::opposite_density_check(3, 3, 10, 0); }), fm::ErrorCode::InvalidDimension);
  EXPECT_EQ(code_of([] { fm::opposite_density_check(3, 1, 0, 0); }), fm::ErrorCode::ValidationError);
}
