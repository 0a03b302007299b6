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

#include "flagmetric/domain.hpp"
#include "flagmetric/symmetric.hpp"

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

fm::GrassmannPoint graph(const Eigen::MatrixXd& x) {
  const auto p = x.cols(), q = x.rows();
  Eigen::MatrixXd frame(p + q, p);
  frame << Eigen::MatrixXd::Identity(p, p), x;
  return fm::GrassmannPoint::canonicalize(frame);
}

Eigen::MatrixXd graph_coords(const fm::GrassmannPoint& v, int p) {
  const Eigen::MatrixXd& r = v.rep();
  return r.bottomRows(r.rows() - p) * r.topRows(p).inverse();
}

}  // namespace

TEST(SampleAutomorphism, PreservesTheIndefiniteForm) {
  for (auto [p, q] : {std::pair{1, 1}, std::pair{2, 2}, std::pair{2, 3}}) {
    EXPECT_LT((fm::sample_automorphism(p, q, 0.0, 1).g - Eigen::MatrixXd::Identity(p + q, p + q)).norm(), 1e-15);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto g = fm::sample_automorphism(p, q, 1.5, seed);
      EXPECT_LT(g.form_residual(), 1e-10);
      // identity component: the space block stays orientation preserving
      EXPECT_GT(g.g.topLeftCorner(p, p).determinant(), 0.0);
    }
  }
  EXPECT_EQ(code_of([] { fm::sample_automorphism(0, 2, 1.0, 0); }), fm::ErrorCode::InvalidDimension);
}

TEST(Boost, ClosedFormOnTheDisk) {
  const double t = 0.7;
  const auto b = fm::boost(1, 2, 0, 0, t);
  EXPECT_LT(b.form_residual(), 1e-14);
  // in B_{1,1}-style coordinates [1; x]: boost moves the basepoint to tanh t
  const fm::GrassmannPoint moved = fm::act(b.g, graph(Eigen::MatrixXd::Zero(2, 1)));
  const Eigen::MatrixXd x = graph_coords(moved, 1);
  EXPECT_NEAR(x(0, 0), std::tanh(t), 1e-14);
  EXPECT_NEAR(x(1, 0), 0.0, 1e-14);
}

TEST(Act, RotationsFixTheBasepointAndRejectWrongSizes) {
  Eigen::Matrix3d r = Eigen::Matrix3d::Identity();
  r.bottomRightCorner(2, 2) << std::cos(1.0), -std::sin(1.0), std::sin(1.0), std::cos(1.0);
  const auto o = graph(Eigen::MatrixXd::Zero(2, 1));
  EXPECT_LT(fm::grassmann_distance(fm::act(r, o), o), 1e-14);
  EXPECT_EQ(code_of([&] { fm::act(Eigen::Matrix2d::Identity(), o); }), fm::ErrorCode::DimensionMismatch);
}

TEST(TransitivityWitness, MovesTheBasepointToAnyPoint) {
  std::mt19937_64 rng(3);
  for (auto [p, q] : {std::pair{1, 2}, std::pair{2, 2}, std::pair{2, 3}, std::pair{3, 2}}) {
    const fm::Domain mb = fm::Domain::matrix_ball(p, q);
    for (const Eigen::MatrixXd& x : fm::domain_samples(mb, 10, 17)) {
      const auto g = fm::transitivity_witness(p, q, x);
      EXPECT_LT(g.form_residual(), 1e-9);
      EXPECT_LT(fm::grassmann_distance(fm::act(g.g, graph(Eigen::MatrixXd::Zero(q, p))), graph(x)), 1e-9);
    }
  }
  EXPECT_EQ(code_of([] { fm::transitivity_witness(1, 1, Eigen::MatrixXd::Constant(1, 1, 1.0)); }),
            fm::ErrorCode::NotInDomain);
  EXPECT_EQ(code_of([] { fm::transitivity_witness(2, 1, Eigen::MatrixXd::Zero(2, 1)); }), fm::ErrorCode::DimensionMismatch);
}

TEST(MatrixBall, AutomorphismsPreserveTheBall) {
  const int p = 2, q = 2;
  const fm::Domain mb = fm::Domain::matrix_ball(p, q);
  const auto samples = fm::domain_samples(mb, 1000, 21);
  int inside = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto g = fm::sample_automorphism(p, q, 1.0, i);
    const Eigen::MatrixXd y = graph_coords(fm::act(g.g, graph(samples[i])), p);
    inside += Eigen::JacobiSVD<Eigen::MatrixXd>(y).singularValues()(0) < 1.0;
  }
  EXPECT_EQ(inside, 1000);
}

TEST(PDCone, NormalizedElementsHaveUnitDeterminant) {
  const auto g = fm::PDConeElement::normalized((Eigen::Matrix3d() << 2, 1, 0, 0, 3, 1, 1, 0, 1).finished());
  EXPECT_NEAR(g.g.determinant(), 1.0, 1e-14);
  EXPECT_EQ(code_of([] { fm::PDConeElement::normalized(Eigen::Matrix2d::Zero()); }), fm::ErrorCode::RankDeficient);
  EXPECT_EQ(code_of([] { fm::PDConeElement::normalized(Eigen::Vector2d(1, -1).asDiagonal()); }),
            fm::ErrorCode::ValidationError);
}

TEST(PDCone, ActionKeepsDefinitenessAndUnitTrace) {
  const auto g = fm::PDConeElement::normalized((Eigen::Matrix2d() << 2, 1, 0.3, 0.8).finished());
  const Eigen::Matrix2d x = (Eigen::Matrix2d() << 2, 0.5, 0.5, 1).finished();
  const Eigen::MatrixXd y = fm::pd_cone_act(g, x);
  EXPECT_TRUE(fm::is_positive_definite(y));
  EXPECT_NEAR(y.trace(), 1.0, 1e-15);
  const Eigen::MatrixXd direct = g.g * x * g.g.transpose();
  EXPECT_LT((y - direct / direct.trace()).norm(), 1e-14);
  EXPECT_EQ(code_of([&] { fm::pd_cone_act(g, Eigen::Vector2d(1, -1).asDiagonal()); }), fm::ErrorCode::NotPD);
}

TEST(PDCone, SvecIsAnIsometryAndInvertible) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::Matrix3d a, b;
    for (int i = 0; i < 9; ++i) a.data()[i] = gauss(rng), b.data()[i] = gauss(rng);
    a = (a + a.transpose()).eval();
    b = (b + b.transpose()).eval();
    EXPECT_NEAR(fm::svec(a).dot(fm::svec(b)), (a * b).trace(), 1e-12);
    EXPECT_LT((fm::unsvec(fm::svec(a), 3) - a).norm(), 1e-14);
  }
  EXPECT_EQ(code_of([] { fm::unsvec(Eigen::VectorXd::Zero(4), 3); }), fm::ErrorCode::DimensionMismatch);
}

TEST(PDCone, CongruenceMatrixMatchesTheDirectAction) {
  const Eigen::Matrix3d g = (Eigen::Matrix3d() << 1, 2, 0, 0, 1, 3, 1, 0, 1).finished();
  const Eigen::Matrix3d x = (Eigen::Matrix3d() << 4, 1, 0, 1, 3, 1, 0, 1, 2).finished();
  EXPECT_LT((fm::congruence_matrix(g) * fm::svec(x) - fm::svec(g * x * g.transpose())).norm(), 1e-12);
}
