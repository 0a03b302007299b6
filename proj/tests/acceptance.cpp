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

// Runs the eleven acceptance criteria at their stated tolerances and prints
// one PASS/FAIL line per criterion. Exits nonzero if any criterion fails.

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "flagmetric/flagmetric.hpp"

namespace fm = flagmetric;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

/// Convex polygon with 5-12 vertices at sorted random angles on a random
/// ellipse; vertices on a strictly convex curve are in convex position.
fm::Domain random_polygon(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count(5, 12);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const int m = count(rng);
  std::vector<double> angles;
  // keep consecutive gaps at least a fifth of the uniform spacing
  const double min_gap = 2.0 * std::numbers::pi / m / 5.0;
  while (true) {
    angles.clear();
    for (int i = 0; i < m; ++i) angles.push_back(2.0 * std::numbers::pi * unif(rng));
    std::sort(angles.begin(), angles.end());
    bool ok = angles.front() + 2.0 * std::numbers::pi - angles.back() >= min_gap;
    for (int i = 1; i < m; ++i) ok = ok && angles[i] - angles[i - 1] >= min_gap;
    if (ok) break;
  }
  const double a = 0.5 + 1.5 * unif(rng), b = 0.5 + 1.5 * unif(rng), rot = std::numbers::pi * unif(rng);
  const Eigen::Vector2d c(unif(rng) - 0.5, unif(rng) - 0.5);
  const Eigen::Matrix2d r = Eigen::Rotation2Dd(rot).toRotationMatrix();
  std::vector<Eigen::VectorXd> vertices;
  for (double t : angles) vertices.push_back(c + r * Eigen::Vector2d(a * std::cos(t), b * std::sin(t)));
  return fm::Domain::polytope(std::move(vertices));
}

Outcome hilbert_consistency() {
  std::mt19937_64 rng(101);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const fm::Domain d = random_polygon(rng);
    const fm::CaratheodoryMetric metric(d);
    const auto s = fm::domain_samples(d, 200, 1000 + k);
    for (int i = 0; i < 100; ++i) {
      const auto x = d.point(s[2 * i]), y = d.point(s[2 * i + 1]);
      worst = std::max(worst, std::abs(2.0 * metric(x, y).value - fm::hilbert_metric_line(d, x, y)));
    }
  }
  return {worst <= 1e-8, fmt("max |2C - H| = %.3g over 2000 pairs", worst)};
}

Outcome ball_closed_form() {
  fm::OptimizerConfig cfg;
  cfg.starts = 64;
  const fm::Domain disk = fm::Domain::unit_disk();
  const fm::CaratheodoryMetric metric(disk, cfg);
  const auto o = disk.point(Eigen::MatrixXd(Eigen::Vector2d::Zero()));
  double worst = 0.0;
  for (int k = 1; k <= 9; ++k) {
    const double t = 0.1 * k;
    const double c = metric(o, disk.point(Eigen::MatrixXd(Eigen::Vector2d(t, 0.0)))).value;
    worst = std::max(worst, std::abs(c - 0.5 * std::log((1.0 + t) / (1.0 - t))));
  }
  return {worst <= 1e-4, fmt("max error %.3g for t = 0.1..0.9", worst)};
}

Outcome metric_axioms() {
  const std::vector<fm::Domain> domains{
      fm::Domain::polytope({Eigen::Vector2d(1.0, 0.1), Eigen::Vector2d(0.2, 1.1), Eigen::Vector2d(-0.9, 0.5),
                            Eigen::Vector2d(-0.7, -0.7), Eigen::Vector2d(0.4, -0.9)}),
      fm::Domain::ball(Eigen::Vector2d(0.2, -0.1), (Eigen::Matrix2d() << 2, 0.5, 0.5, 1).finished(), 0.8),
      fm::Domain::matrix_ball(2, 2), fm::Domain::pd_cone(3), fm::Domain::lshape()};
  int checked = 0, bad_sym = 0, bad_tri = 0, bad_pos = 0;
  double worst_slack = 0.0;
  for (std::size_t v = 0; v < domains.size(); ++v) {
    const fm::Domain& d = domains[v];
    const fm::CaratheodoryMetric metric(d);
    const auto s = fm::domain_samples(d, 600, 300 + v);
    for (int i = 0; i < 200; ++i) {
      const auto x = d.point(s[3 * i]), y = d.point(s[3 * i + 1]), z = d.point(s[3 * i + 2]);
      const fm::MetricValue xy = metric(x, y), yx = metric(y, x);
      const double sym_tol = xy.method == fm::MetricMethod::Exact ? 1e-9 : 2.0 * std::max(xy.error_bound, yx.error_bound);
      bad_sym += std::abs(xy.value - yx.value) > sym_tol;
      bad_pos += !(xy.value > 0.0);
      const double slack = fm::dual_pair_value(x, z, *xy.xi, *xy.eta) + fm::dual_pair_value(z, y, *xy.xi, *xy.eta) -
                           fm::dual_pair_value(x, y, *xy.xi, *xy.eta);
      worst_slack = std::min(worst_slack, slack);
      bad_tri += slack < -1e-12;
      ++checked;
    }
  }
  std::ostringstream os;
  os << checked << " triples over 5 variants; symmetry failures " << bad_sym << ", triangle failures " << bad_tri
     << " (min slack " << worst_slack << "), positivity failures " << bad_pos;
  return {bad_sym == 0 && bad_tri == 0 && bad_pos == 0 && checked == 1000, os.str()};
}

Outcome invariance() {
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<Eigen::MatrixXd> boosts;
  for (int k = 0; k < 100; ++k) {
    const double t = 4.0 * unif(rng) - 2.0, a = 2.0 * std::numbers::pi * unif(rng);
    Eigen::Matrix3d r = Eigen::Matrix3d::Identity();
    r.bottomRightCorner(2, 2) = Eigen::Rotation2Dd(a).toRotationMatrix();
    boosts.push_back(r * fm::boost(1, 2, 0, 0, t).g * r.transpose());
  }
  std::vector<Eigen::MatrixXd> diagonals;
  for (int k = 0; k < 100; ++k)
    diagonals.push_back(Eigen::Vector3d(std::exp(4 * unif(rng) - 2), std::exp(4 * unif(rng) - 2),
                                        std::exp(4 * unif(rng) - 2)).asDiagonal());
  std::vector<Eigen::MatrixXd> indefinite;
  for (int k = 0; k < 50; ++k) indefinite.push_back(fm::sample_automorphism(2, 2, 1.0, 500 + k).g);

  const double disk = fm::invariance_check(fm::Domain::unit_disk(), boosts, 4, {}, 1).max_deviation;
  const double tri = fm::invariance_check(fm::Domain::positive_orthant(3), diagonals, 4, {}, 2).max_deviation;
  const double mb = fm::invariance_check(fm::Domain::matrix_ball(2, 2), indefinite, 3, {}, 3).max_deviation;
  std::ostringstream os;
  os << "disk " << disk << " (<= 1e-4), triangle " << tri << " (<= 1e-8), B_{2,2} " << mb << " (<= 1e-3)";
  return {disk <= 1e-4 && tri <= 1e-8 && mb <= 1e-3, os.str()};
}

Outcome matrix_ball_dual() {
  std::mt19937_64 rng(505);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  auto random_matrix = [&](int r, int c, double sigma) {
    Eigen::MatrixXd m(r, c);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = gauss(rng);
    return Eigen::MatrixXd(m * (sigma / Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues()(0)));
  };
  double min_det = std::numeric_limits<double>::infinity(), min_pair = min_det, max_witness = 0.0;
  for (auto [p, q] : {std::pair{2, 2}, std::pair{2, 3}}) {
    const fm::Domain d = fm::Domain::matrix_ball(p, q);
    const fm::ParametricMatrixBall dual{p, q, d.chart()};
    for (int i = 0; i < 5000; ++i) {
      const Eigen::MatrixXd x = random_matrix(q, p, unif(rng) * (1.0 - 1e-9));
      const Eigen::MatrixXd y = random_matrix(p, q, unif(rng));
      const Eigen::VectorXd theta = Eigen::Map<const Eigen::VectorXd>(y.data(), y.size());
      min_det = std::min(min_det, std::abs((Eigen::MatrixXd::Identity(q, q) - x * y).determinant()));
      min_pair = std::min(min_pair, fm::pairing(d.point(x), dual.point(theta)));
    }
    for (int i = 0; i < 50; ++i) {
      const Eigen::MatrixXd y = random_matrix(p, q, 1.0 + 2.0 * unif(rng) + 1e-6);
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(y, Eigen::ComputeFullU | Eigen::ComputeFullV);
      // X = v u^T / sigma gives XY v = v, so I - XY is singular
      const Eigen::MatrixXd x = svd.matrixV().col(0) * svd.matrixU().col(0).transpose() / svd.singularValues()(0);
      if (!d.contains_coords(x)) return {false, "witness X left the ball"};
      const Eigen::VectorXd theta = Eigen::Map<const Eigen::VectorXd>(y.data(), y.size());
      max_witness = std::max({max_witness, std::abs((Eigen::MatrixXd::Identity(q, q) - x * y).determinant()),
                              fm::pairing(d.point(x), dual.point(theta))});
    }
  }
  std::ostringstream os;
  os << "1e4 pairs: min |det(I - XY)| " << min_det << ", min pairing " << min_pair << "; 100 witnesses: max "
     << max_witness;
  return {min_det > 0.0 && min_pair > 0.0 && max_witness < 1e-10, os.str()};
}

Outcome dual_convexity() {
  std::mt19937_64 rng(606);
  const fm::Domain poly = random_polygon(rng);
  int certified = 0;
  for (const auto& b : fm::boundary_sample(poly, 360, 6)) {
    try {
      certified += fm::dual_convexity_certificate(poly, b.coords).valid;
    } catch (const fm::Error&) {
    }
  }
  const fm::Domain l = fm::Domain::lshape();
  const auto cache = fm::oracle_sample_set(l);
  int reflex = 0, reflex_raised = 0, other = 0, other_ok = 0;
  for (const auto& b : fm::boundary_sample(l, 360, 6)) {
    const double u = b.coords(0), v = b.coords(1);
    const bool on_reflex = (std::abs(u) < 1e-9 && v >= -1e-9) || (std::abs(v) < 1e-9 && u >= -1e-9);
    bool raised = false, valid = false;
    try {
      valid = fm::dual_convexity_certificate(l, b.coords, {}, &cache).valid;
    } catch (const fm::Error& e) {
      raised = e.code() == fm::ErrorCode::NotDualConvexAt;
    }
    if (on_reflex) {
      ++reflex;
      reflex_raised += raised;
    } else {
      ++other;
      other_ok += valid;
    }
  }
  std::ostringstream os;
  os << "polygon " << certified << "/360 certified; L-shape reflex " << reflex_raised << "/" << reflex
     << " raised, elsewhere " << other_ok << "/" << other << " certified";
  return {certified == 360 && reflex > 0 && reflex_raised == reflex && other_ok == other, os.str()};
}

Outcome completeness() {
  const fm::Domain disk = fm::Domain::unit_disk();
  const fm::Domain square = fm::Domain::polytope(
      {Eigen::Vector2d(-1, -1), Eigen::Vector2d(1, -1), Eigen::Vector2d(1, 1), Eigen::Vector2d(-1, 1)});
  const auto vd = fm::completeness_probe(disk, {}, 8, 7);
  const auto vs = fm::completeness_probe(square, {}, 8, 7);
  auto min_sup = [](const fm::CompletenessVerdict& v) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& p : v.profiles) m = std::min(m, p.sup);
    return m;
  };
  const auto vl = fm::completeness_probe(fm::Domain::lshape(), {}, 0, 7, {Eigen::MatrixXd(Eigen::Vector2d::Zero())});
  const bool l_ok = vl.kind == fm::CompletenessKind::CauchyEscape && vl.witness &&
                    vl.profiles[*vl.witness].sup < 3.0 && vl.profiles[*vl.witness].oscillation < 1e-3;
  std::ostringstream os;
  os << "disk " << fm::to_string(vd.kind) << " (min sup " << min_sup(vd) << "), square " << fm::to_string(vs.kind)
     << " (min sup " << min_sup(vs) << "), L-shape corner " << fm::to_string(vl.kind);
  if (vl.witness) os << " (sup " << vl.profiles[*vl.witness].sup << ", oscillation " << vl.profiles[*vl.witness].oscillation << ")";
  return {vd.kind == fm::CompletenessKind::DivergesEverywhere && min_sup(vd) >= 5.0 &&
              vs.kind == fm::CompletenessKind::DivergesEverywhere && min_sup(vs) >= 5.0 && l_ok,
          os.str()};
}

Outcome kobayashi_bridge() {
  std::mt19937_64 rng(808);
  double worst_c = 0.0, worst_k = 0.0;
  for (int k = 0; k < 10; ++k) {
    const fm::Domain d = random_polygon(rng);
    const fm::CaratheodoryMetric metric(d);
    const auto s = fm::domain_samples(d, 20, 800 + k);
    for (int i = 0; i < 10; ++i) {
      const auto x = d.point(s[2 * i]), y = d.point(s[2 * i + 1]);
      worst_c = std::max(worst_c, std::abs(fm::kobayashi_c(d, metric.dual(), x, y).value - 2.0 * metric(x, y).value));
      worst_k = std::max(worst_k, std::abs(fm::kobayashi_k(d, x, y, 1, 16, k) - fm::hilbert_metric_line(d, x, y)));
    }
  }
  std::ostringstream os;
  os << "100 pairs on 10 polygons: max |c - 2C| " << worst_c << ", max |k - H| " << worst_k;
  return {worst_c <= 1e-6 && worst_k <= 1e-3, os.str()};
}

Outcome fiber_escape() {
  std::mt19937_64 rng(909);
  std::normal_distribution<double> gauss;
  const std::vector<std::pair<int, std::vector<int>>> spaces{
      {3, {1, 2}}, {4, {1, 2}}, {4, {1, 3}}, {4, {2, 3}}, {4, {1, 2, 3}}, {5, {1, 3}}, {5, {2, 4}}, {5, {1, 2, 4}}};
  int found = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto& [n, dims] = spaces[trial % spaces.size()];
    const int d = dims[(trial / spaces.size()) % dims.size()];
    Eigen::MatrixXd g(n, n);
    for (Eigen::Index i = 0; i < g.size(); ++i) g.data()[i] = gauss(rng);
    const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();
    const auto ref = fm::FullFlag::from_basis(q, fm::detail::complementary_dims(n, dims));
    const auto base = fm::random_grassmann(n, d, rng);
    try {
      const auto w = fm::fiber_escape_witness(n, dims, d, base, ref);
      found += w.pairing < 1e-10 && fm::same_subspace(fm::flag_project(w.flag, d), base);
    } catch (const fm::Error&) {
    }
  }
  const auto spec = fm::FlagDomainSpec::standard(4, {1, 2}, {0.5, 0.5});
  const auto demo = fm::fiber_boundary_demo(spec, fm::FullFlag::from_basis(Eigen::MatrixXd::Identity(4, 4), {1, 2}), 40);
  double drift = 0.0;
  bool decreasing = true;
  for (std::size_t k = 0; k < demo.margin.size(); ++k) {
    drift = std::max(drift, demo.projection_drift[k]);
    if (k > 0) decreasing = decreasing && demo.margin[k] < demo.margin[k - 1];
  }
  std::ostringstream os;
  os << found << "/100 witnesses; demo final margin " << demo.margin.back() << ", projection drift " << drift
     << (decreasing ? ", margins decreasing" : ", margins not decreasing");
  return {found == 100 && demo.margin.back() < 1e-6 && drift < 1e-12 && decreasing, os.str()};
}

Outcome density() {
  std::ostringstream os;
  bool ok = true;
  for (auto [n, p] : {std::pair{3, 1}, std::pair{4, 2}, std::pair{5, 2}}) {
    const double f = fm::opposite_density_check(n, p, 100000, 1000 + n);
    ok = ok && f == 1.0;
    os << "(" << n << "," << p << "): " << f << "  ";
  }
  return {ok, os.str()};
}

Outcome pd_cone() {
  const fm::Domain pd = fm::Domain::pd_cone(3);
  const fm::CaratheodoryMetric metric(pd);
  std::mt19937_64 rng(1111);
  std::normal_distribution<double> gauss;
  auto random_pd = [&] {
    Eigen::Matrix3d a;
    for (int i = 0; i < 9; ++i) a.data()[i] = gauss(rng);
    return Eigen::Matrix3d(a * a.transpose() + 0.05 * Eigen::Matrix3d::Identity());
  };
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const Eigen::Matrix3d x = random_pd(), y = random_pd();
    const Eigen::Vector3d ev = Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::Matrix3d>(y, x).eigenvalues();
    const double expected = 0.5 * std::log(ev(2) / ev(0));
    worst = std::max(worst, std::abs(metric(pd.pd_point(x), pd.pd_point(y)).value - expected));
  }
  return {worst <= 1e-3, fmt("max error %.3g over 50 pairs", worst)};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
    double budget_s;  // stated runtime limit, 0 when none
  };
  const std::vector<Criterion> criteria{
      {"Hilbert consistency", hilbert_consistency, 10.0},
      {"Ball closed form", ball_closed_form, 30.0},
      {"Metric axioms", metric_axioms, 0.0},
      {"Invariance", invariance, 0.0},
      {"Matrix-ball dual", matrix_ball_dual, 0.0},
      {"Dual convexity", dual_convexity, 0.0},
      {"Completeness dichotomy", completeness, 0.0},
      {"Kobayashi bridge", kobayashi_bridge, 0.0},
      {"Fiber escape", fiber_escape, 0.0},
      {"Density", density, 0.0},
      {"PD cone", pd_cone, 0.0},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = criteria[i].run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (criteria[i].budget_s > 0.0 && secs > criteria[i].budget_s) {
      out.pass = false;
      out.detail += fmt("; over the %.0f s budget", criteria[i].budget_s);
    }
    failures += !out.pass;
    std::printf("%s %2zu %-24s %s [%.2f s]\n", out.pass ? "PASS" : "FAIL", i + 1, criteria[i].name,
                out.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
