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

#ifndef FLAGMETRIC_DUALITY_HPP
#define FLAGMETRIC_DUALITY_HPP

// Dual domains: the set of dual points transverse to every point of a
// domain, in the representation that suits each domain variant, together with
// membership, properness and dual-convexity certificates.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "flagmetric/domain.hpp"
#include "flagmetric/geometry.hpp"
#include "flagmetric/symmetric.hpp"

namespace flagmetric {

// ---------------------------------------------------------------------------
// Dual representations

/// Finite list of dual points, the exact extreme points of the dual.
struct ExplicitVertices {
  std::vector<DualGrassmannPoint> points;
};

/// Dual of an ellipsoid: functionals 1 + w.(u - c) with w = A^{1/2} v / r and
/// |v| <= 1, parametrized by v in the closed unit ball.
struct PolarBall {
  ChartSpec chart;
  Eigen::VectorXd center;
  Eigen::MatrixXd scale;     // A^{1/2} / r
  Eigen::MatrixXd jacobian;  // d(ambient covector)/dv

  static PolarBall of(const BallDomain& b) {
    PolarBall out;
    out.chart = b.chart;
    out.center = b.center;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b.shape);
    out.scale = es.operatorSqrt() / b.radius;
    const auto d = b.center.size();
    Eigen::MatrixXd lift(d + 1, d);
    lift << -b.center.transpose(), Eigen::MatrixXd::Identity(d, d);
    out.jacobian = b.chart.frame * lift * out.scale;
    return out;
  }

  int param_dim() const { return static_cast<int>(center.size()); }

  Eigen::VectorXd covector(const Eigen::VectorXd& v) const {
    const Eigen::VectorXd w = scale * v;
    Eigen::VectorXd fc(w.size() + 1);
    fc << 1.0 - w.dot(center), w;
    return chart.ambient_covector(fc);
  }

  Eigen::VectorXd project(const Eigen::VectorXd& v) const {
    const double n = v.norm();
    return n > 1.0 ? Eigen::VectorXd(v / n) : v;
  }

  template <class Rng>
  Eigen::VectorXd sample(Rng& rng) const {
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Eigen::VectorXd g(param_dim());
    for (auto& c : g) c = gauss(rng);
    return g.normalized() * std::pow(unif(rng), 1.0 / param_dim());
  }

  double log_pairing(const Eigen::MatrixXd& x, const Eigen::VectorXd& v, Eigen::VectorXd* grad) const {
    const Eigen::VectorXd xv = x.col(0);
    const double val = covector(v).dot(xv);
    if (grad) *grad = jacobian.transpose() * xv / val;
    return std::log(std::abs(val));
  }

  DualGrassmannPoint point(const Eigen::VectorXd& v) const { return hyperplane_from_covector(covector(v)); }
};

/// Dual of B_{p,q}: graphs [Y; I_q] with Y p x q, sigma_max(Y) <= 1. The
/// pairing with [I; X] is det(I - X Y).
struct ParametricMatrixBall {
  int p = 1;
  int q = 1;
  ChartSpec chart;

  int param_dim() const { return p * q; }

  Eigen::MatrixXd matrix(const Eigen::VectorXd& theta) const {
    return Eigen::Map<const Eigen::MatrixXd>(theta.data(), p, q);
  }

  Eigen::VectorXd project(const Eigen::VectorXd& theta) const {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(matrix(theta), Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.singularValues()(0) <= 1.0) return theta;
    const Eigen::VectorXd s = svd.singularValues().cwiseMin(1.0);
    Eigen::MatrixXd y = svd.matrixU() * s.asDiagonal() * svd.matrixV().transpose();
    return Eigen::Map<Eigen::VectorXd>(y.data(), y.size());
  }

  template <class Rng>
  Eigen::VectorXd sample(Rng& rng) const {
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Eigen::MatrixXd g(p, q);
    for (Eigen::Index i = 0; i < g.size(); ++i) g.data()[i] = gauss(rng);
    g *= std::pow(unif(rng), 1.0 / param_dim()) / Eigen::JacobiSVD<Eigen::MatrixXd>(g).singularValues()(0);
    return Eigen::Map<Eigen::VectorXd>(g.data(), g.size());
  }

  Eigen::MatrixXd graph(const Eigen::VectorXd& theta) const {
    Eigen::MatrixXd out(p + q, q);
    out << matrix(theta), Eigen::MatrixXd::Identity(q, q);
    return out;
  }

  double log_pairing(const Eigen::MatrixXd& x, const Eigen::VectorXd& theta, Eigen::VectorXd* grad) const {
    Eigen::MatrixXd m(p + q, p + q);
    m << chart.frame.transpose() * x, graph(theta);
    const auto lu = m.partialPivLu();
    const double det = lu.determinant();
    if (grad) {
      const Eigen::MatrixXd g = lu.inverse().block(p, 0, q, p).transpose();
      *grad = Eigen::Map<const Eigen::VectorXd>(g.data(), g.size());
    }
    return std::log(std::abs(det));
  }

  DualGrassmannPoint point(const Eigen::VectorXd& theta) const {
    return DualGrassmannPoint::canonicalize(chart.frame * graph(theta));
  }
};

/// Rank-one trace functionals X -> v^T X v on the PD cone, |v| = 1.
struct PDConePairing {
  int d = 2;

  int param_dim() const { return d; }

  Eigen::VectorXd project(const Eigen::VectorXd& v) const {
    const double n = v.norm();
    return n > 0.0 ? Eigen::VectorXd(v / n) : Eigen::VectorXd(Eigen::VectorXd::Unit(d, 0));
  }

  template <class Rng>
  Eigen::VectorXd sample(Rng& rng) const {
    std::normal_distribution<double> gauss;
    Eigen::VectorXd g(d);
    for (auto& c : g) c = gauss(rng);
    return project(g);
  }

  double log_pairing(const Eigen::MatrixXd& x, const Eigen::VectorXd& v, Eigen::VectorXd* grad) const {
    const Eigen::MatrixXd s = unsvec(x.col(0), d);
    const Eigen::VectorXd sv = s * v;
    const double val = v.dot(sv);
    if (grad) *grad = 2.0 * sv / val;
    return std::log(std::abs(val));
  }

  DualGrassmannPoint point(const Eigen::VectorXd& v) const {
    return hyperplane_from_covector(svec(v * v.transpose()));
  }
};

/// Certified samples of the dual of an oracle domain. Suprema over such a
/// cloud are lower bounds of the true ones.
struct SampleCloud {
  std::vector<DualGrassmannPoint> points;
  std::vector<double> margins;
  double resolution = 0.0;  // spacing of the domain samples used to certify
  int domain_samples = 0;
};

using DualRepresentation = std::variant<ExplicitVertices, PolarBall, ParametricMatrixBall, PDConePairing, SampleCloud>;

enum class DualKind { ExplicitVertices, ParametricBall, ParametricMatrixBall, PDConePairing, SampleCloud };

inline DualKind dual_kind(const DualRepresentation& d) { return static_cast<DualKind>(d.index()); }

inline const char* to_string(DualKind k) {
  switch (k) {
    case DualKind::ExplicitVertices: return "explicit_vertices";
    case DualKind::ParametricBall: return "parametric_polar_ball";
    case DualKind::ParametricMatrixBall: return "parametric_matrix_ball";
    case DualKind::PDConePairing: return "pd_cone_pairing";
    case DualKind::SampleCloud: return "sample_cloud";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Certificates

enum class CertificateKind { DualMembership, Properness, DualConvexity };

struct Certificate {
  CertificateKind kind = CertificateKind::DualMembership;
  bool valid = false;
  double margin = 0.0;
  std::optional<DualGrassmannPoint> dual;   // tested / found dual point
  std::optional<Eigen::MatrixXd> point;     // witness point in chart coordinates
  double radius = 0.0;                      // properness neighbourhood radius
  std::string note;
};

/// Relative shrink factor applied toward the basepoint before measuring
/// membership margins.
inline constexpr double kShrink = 1e-3;

/// Absolute slack on unit-normalized pairings when testing sign consistency
/// against sampled points, which sit within rounding of the boundary.
inline constexpr double kSignSlack = 1e-12;

namespace detail {

/// Unit homogeneous vectors of sampled points of an oracle domain: a grid over
/// the search box plus ray exits from the basepoint.
struct OracleSampleSet {
  Eigen::MatrixXd unit_points;  // n x N, ambient, unit columns
  Eigen::MatrixXd coords;       // d x N
  Eigen::MatrixXd boundary;     // d x M, ray exits (inside to rounding)
  double spacing = 0.0;
  double extent = 0.0;
  bool bounded = true;
};

inline OracleSampleSet oracle_sample_set(const Domain& domain, int grid = 61, int rays = 1024) {
  const auto& o = *domain.as<OracleDomain>();
  const auto d = o.basepoint.size();
  std::vector<Eigen::VectorXd> pts;
  OracleSampleSet out;
  if (d == 2) {
    for (int i = 0; i < grid; ++i)
      for (int j = 0; j < grid; ++j) {
        Eigen::Vector2d u(o.box_lo(0) + (o.box_hi(0) - o.box_lo(0)) * (i + 0.5) / grid,
                          o.box_lo(1) + (o.box_hi(1) - o.box_lo(1)) * (j + 0.5) / grid);
        if (o.member(u)) pts.push_back(u);
      }
    out.spacing = (o.box_hi - o.box_lo).maxCoeff() / grid;
  }
  std::vector<Eigen::VectorXd> bnd;
  const Eigen::MatrixXd base = o.basepoint;
  for (const auto& dir : ray_directions(domain, rays, 0)) {
    const RayExit e = ray_exit(domain, base, dir);
    if (!e.bounded) out.bounded = false;
    bnd.push_back(base.col(0) + e.inside * dir.col(0));
  }
  pts.insert(pts.end(), bnd.begin(), bnd.end());
  pts.push_back(o.basepoint);
  out.coords.resize(d, static_cast<Eigen::Index>(pts.size()));
  out.unit_points.resize(d + 1, static_cast<Eigen::Index>(pts.size()));
  for (std::size_t k = 0; k < pts.size(); ++k) {
    out.coords.col(k) = pts[k];
    Eigen::VectorXd h(d + 1);
    h << 1.0, pts[k];
    out.unit_points.col(k) = o.chart.frame * h.normalized();
    out.extent = std::max(out.extent, pts[k].norm());
  }
  out.boundary.resize(d, static_cast<Eigen::Index>(bnd.size()));
  for (std::size_t k = 0; k < bnd.size(); ++k) out.boundary.col(k) = bnd[k];
  return out;
}

/// Minimum of the unit covector f over the sample set, oriented positive at
/// the basepoint (last column).
inline double oracle_min_value(const OracleSampleSet& s, const Eigen::VectorXd& f) {
  const Eigen::VectorXd vals = s.unit_points.transpose() * (f / f.norm());
  return vals.minCoeff();
}

inline Eigen::VectorXd homogeneous(const Eigen::VectorXd& u) {
  Eigen::VectorXd h(u.size() + 1);
  h << 1.0, u;
  return h;
}

inline Certificate membership_from_values(const std::vector<double>& vals, const std::vector<Eigen::VectorXd>& where,
                                          const DualGrassmannPoint& xi, double slack) {
  Certificate c;
  c.kind = CertificateKind::DualMembership;
  c.dual = xi;
  const auto [lo, hi] = std::minmax_element(vals.begin(), vals.end());
  const bool positive = *lo >= -slack && *hi > slack;
  const bool negative = *hi <= slack && *lo < -slack;
  c.valid = positive || negative;
  if (c.valid) {
    c.margin = std::numeric_limits<double>::infinity();
    for (double v : vals) c.margin = std::min(c.margin, std::abs(v));
  } else {
    // zero crossing of the affine numerator between two opposite-sign samples
    const auto i = static_cast<std::size_t>(lo - vals.begin());
    const auto j = static_cast<std::size_t>(hi - vals.begin());
    const double t = vals[j] / (vals[j] - vals[i]);
    c.point = Eigen::MatrixXd(where[j] + t * (where[i] - where[j]));
    c.note = "pairing changes sign inside the domain";
  }
  return c;
}

}  // namespace detail

/// Sampled points of an oracle domain used by its certificates. Building it
/// costs a few thousand ray exits, so callers certifying many points build it
/// once and pass it along.
using OracleSampleSet = detail::OracleSampleSet;

inline OracleSampleSet oracle_sample_set(const Domain& domain) {
  if (domain.kind() != DomainKind::Oracle) fail(ErrorCode::ValidationError, "sample sets are for oracle domains");
  return detail::oracle_sample_set(domain);
}

/// Certifies that xi is transverse to every point of the domain: the signed
/// pairing keeps one sign over the (open) domain. The margin is the smallest
/// |pairing| over the domain shrunk by kShrink toward its basepoint. Invalid
/// certificates carry an interior witness where the pairing vanishes or
/// changes sign.
inline Certificate dual_membership_certificate(const DualGrassmannPoint& xi, const Domain& domain,
                                               const Tolerances& tol = {}, const OracleSampleSet* cache = nullptr);

namespace detail {

inline Certificate oracle_membership(const DualGrassmannPoint& xi, const Domain& domain, const OracleSampleSet& s) {
  const auto& o = *domain.as<OracleDomain>();
  const Eigen::VectorXd f = pairing_functional(xi);
  const Eigen::VectorXd unit = f / f.norm();
  std::vector<double> vals;
  std::vector<Eigen::VectorXd> where;
  vals.reserve(s.coords.cols());
  for (Eigen::Index k = 0; k < s.coords.cols(); ++k) {
    vals.push_back(unit.dot(s.unit_points.col(k)));
    where.push_back(s.coords.col(k));
  }
  Certificate c = membership_from_values(vals, where, xi, kSignSlack);
  if (c.valid) {
    double margin = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < s.coords.cols(); ++k) {
      const Eigen::VectorXd u = o.basepoint + (1.0 - kShrink) * (s.coords.col(k) - o.basepoint);
      const Eigen::VectorXd h = o.chart.frame * homogeneous(u).normalized();
      margin = std::min(margin, std::abs(unit.dot(h)));
    }
    c.margin = margin;
  }
  c.note += "sampled: " + std::to_string(s.coords.cols()) + " domain points";
  return c;
}

}  // namespace detail

inline Certificate dual_membership_certificate(const DualGrassmannPoint& xi, const Domain& domain,
                                               const Tolerances& tol, const OracleSampleSet* cache) {
  if (xi.ambient_dim() != domain.ambient_dim() || xi.plane_dim() != domain.ambient_dim() - domain.plane_dim())
    fail(ErrorCode::DimensionMismatch, "dual point does not pair with this domain");
  return std::visit(
      [&](const auto& d) -> Certificate {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, PolytopeDomain>) {
          std::vector<double> vals;
          std::vector<Eigen::VectorXd> where;
          for (const auto& v : d.vertices) {
            const Eigen::VectorXd u = d.centroid + (1.0 - kShrink) * (v - d.centroid);
            vals.push_back(signed_pairing(d.chart.point(u), xi));
            where.push_back(u);
          }
          Certificate c = detail::membership_from_values(vals, where, xi, 0.0);
          c.note += "exact: linear evaluation at shrunk vertices";
          return c;
        } else if constexpr (std::is_same_v<T, BallDomain>) {
          const Eigen::VectorXd f = pairing_functional(xi);
          const Eigen::VectorXd fc = d.chart.chart_covector(f);
          const Eigen::VectorXd w = fc.tail(fc.size() - 1);
          Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(d.shape);
          const Eigen::MatrixXd inv_sqrt = es.operatorInverseSqrt();
          const double at_center = fc(0) + w.dot(d.center);
          const double spread = (1.0 - kShrink) * d.radius * (inv_sqrt * w).norm();
          Certificate c;
          c.kind = CertificateKind::DualMembership;
          c.dual = xi;
          c.valid = std::abs(at_center) > spread;
          if (c.valid) {
            c.margin = std::numeric_limits<double>::infinity();
            const auto dim = static_cast<int>(d.center.size());
            std::mt19937_64 rng(7);
            for (int k = 0; k < 256; ++k) {
              Eigen::VectorXd dir(dim);
              if (dim == 2) {
                dir << std::cos(2 * std::numbers::pi * k / 256), std::sin(2 * std::numbers::pi * k / 256);
              } else {
                dir = detail::random_direction(dim, 1, rng);
              }
              const Eigen::VectorXd u = d.center + (1.0 - kShrink) * d.radius * inv_sqrt * dir;
              c.margin = std::min(c.margin, pairing(d.chart.point(u), xi));
            }
            // the extreme point of the affine numerator
            if (w.norm() > 0.0) {
              const Eigen::VectorXd step = inv_sqrt * inv_sqrt * w / (inv_sqrt * w).norm();
              const Eigen::VectorXd u = d.center - std::copysign(1.0, at_center) * (1.0 - kShrink) * d.radius * step;
              c.margin = std::min(c.margin, pairing(d.chart.point(u), xi));
            }
          } else {
            const double wn = (inv_sqrt * w).norm();
            const Eigen::VectorXd step = inv_sqrt * inv_sqrt * w / wn;
            c.point = Eigen::MatrixXd(d.center - (at_center / wn) * step);
            c.note = "hyperplane crosses the ball";
          }
          c.note += c.note.empty() ? "exact: closed-form extremes over the ball" : "";
          return c;
        } else if constexpr (std::is_same_v<T, MatrixBallDomain>) {
          Certificate c;
          c.kind = CertificateKind::DualMembership;
          c.dual = xi;
          const Eigen::MatrixXd z = d.chart.frame.transpose() * xi.rep();
          const Eigen::MatrixXd top = z.topRows(d.p), bottom = z.bottomRows(d.q);
          const auto lu = bottom.partialPivLu();
          if (std::abs(lu.determinant()) <= tol.rank_tol) {
            c.valid = false;
            c.point = Eigen::MatrixXd(Eigen::MatrixXd::Zero(d.q, d.p));
            c.note = "dual point is not a graph; meets the basepoint";
            return c;
          }
          const Eigen::MatrixXd y = top * lu.inverse();
          Eigen::JacobiSVD<Eigen::MatrixXd> svd(y, Eigen::ComputeFullU | Eigen::ComputeFullV);
          const double smax = svd.singularValues()(0);
          if (smax > 1.0 + tol.rank_tol) {
            c.valid = false;
            // X = v1 u1^T / sigma_1 has sigma_max < 1 and det(I - X Y) = 0
            c.point = Eigen::MatrixXd(svd.matrixV().col(0) * svd.matrixU().col(0).transpose() / smax);
            c.note = "sigma_max(Y) > 1";
            return c;
          }
          c.valid = true;
          const Eigen::MatrixXd aligned = (1.0 - kShrink) * svd.matrixV() * Eigen::MatrixXd::Identity(d.q, d.p) *
                                          svd.matrixU().transpose();
          c.margin = pairing(d.chart.point(aligned), xi);
          c.note = "exact: sigma_max(Y) <= 1";
          return c;
        } else if constexpr (std::is_same_v<T, PDConeDomain>) {
          Certificate c;
          c.kind = CertificateKind::DualMembership;
          c.dual = xi;
          const Eigen::VectorXd f = pairing_functional(xi);
          const Eigen::MatrixXd fm = unsvec(f, d.d);
          Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(fm);
          const Eigen::VectorXd lam = es.eigenvalues();
          const double scale = lam.cwiseAbs().maxCoeff();
          const double slack = 1e-12 * scale;
          const bool psd = lam(0) >= -slack, nsd = lam(d.d - 1) <= slack;
          c.valid = (psd || nsd) && scale > 0.0;
          if (c.valid) {
            const int k = psd ? 0 : d.d - 1;
            const Eigen::VectorXd v = es.eigenvectors().col(k);
            const Eigen::MatrixXd x = (1.0 - kShrink) * v * v.transpose() +
                                      kShrink / d.d * Eigen::MatrixXd::Identity(d.d, d.d);
            c.margin = pairing(projective_point(svec(x)), xi);
            c.note = "exact: functional is semidefinite";
          } else {
            // positive combination of the extreme eigenvectors annihilated by f
            const Eigen::VectorXd vmin = es.eigenvectors().col(0), vmax = es.eigenvectors().col(d.d - 1);
            const Eigen::MatrixXd rest = Eigen::MatrixXd::Identity(d.d, d.d) - vmin * vmin.transpose() -
                                         vmax * vmax.transpose();
            const double eps = 1e-3 * std::min(-lam(0), lam(d.d - 1)) / std::max(1.0, std::abs((fm * rest).trace()));
            const double a = -(lam(0) + eps * (fm * rest).trace()) / lam(d.d - 1);
            const Eigen::MatrixXd x = a * vmax * vmax.transpose() + vmin * vmin.transpose() + eps * rest;
            c.point = *d.chart.coordinates(projective_point(svec(x)));
            c.note = "functional is indefinite";
          }
          return c;
        } else {
          if (cache) return detail::oracle_membership(xi, domain, *cache);
          return detail::oracle_membership(xi, domain, detail::oracle_sample_set(domain));
        }
      },
      domain.variant());
}

// ---------------------------------------------------------------------------
// Properness

/// Searches for an interior point of the dual: the chart's point at infinity
/// together with a radius r such that every dual point within Grassmann
/// distance r of it is certified on a net of the sphere of radius r.
inline Certificate properness_certificate(const Domain& domain, const Tolerances& tol = {}) {
  Certificate c;
  c.kind = CertificateKind::Properness;
  const ChartSpec& chart = domain.chart();
  const DualGrassmannPoint eta = chart.at_infinity();
  c.dual = eta;

  // Net of perturbations of eta in the chart frame, as raw dual frames.
  std::vector<DualGrassmannPoint> net;
  double radius = 0.0;
  std::mt19937_64 rng(11);
  if (domain.is_projective() && domain.kind() != DomainKind::PDCone) {
    double extent = 0.0;
    bool bounded = true;
    std::visit(
        [&](const auto& d) {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, PolytopeDomain>) {
            for (const auto& v : d.vertices) extent = std::max(extent, v.norm());
          } else if constexpr (std::is_same_v<T, BallDomain>) {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(d.shape);
            extent = d.center.norm() + d.radius / std::sqrt(es.eigenvalues()(0));
          } else if constexpr (std::is_same_v<T, MatrixBallDomain>) {
            extent = 1.0;
          } else if constexpr (std::is_same_v<T, OracleDomain>) {
            const auto s = detail::oracle_sample_set(domain, 21, 256);
            extent = s.extent;
            bounded = s.bounded;
          }
        },
        domain.variant());
    if (!bounded || !std::isfinite(extent)) {
      c.valid = false;
      c.note = "domain reaches the edge of its search region; not bounded in the chart";
      return c;
    }
    const double wr = 0.5 / std::max(extent, 1e-300);
    radius = std::atan(wr);
    const int dim = domain.coord_rows();
    for (int k = 0; k < 16; ++k) {
      Eigen::VectorXd dir(dim);
      if (dim == 2) {
        dir << std::cos(2 * std::numbers::pi * k / 16), std::sin(2 * std::numbers::pi * k / 16);
      } else if (dim == 1) {
        dir << (k % 2 == 0 ? 1.0 : -1.0);
      } else {
        dir = detail::random_direction(dim, 1, rng);
      }
      Eigen::VectorXd fc(dim + 1);
      fc << 1.0, wr * dir;
      net.push_back(hyperplane_from_covector(chart.ambient_covector(fc)));
    }
  } else if (domain.kind() == DomainKind::MatrixBall) {
    const auto& mb = *domain.as<MatrixBallDomain>();
    radius = std::atan(0.5);
    for (int k = 0; k < 16; ++k) {
      Eigen::MatrixXd y = detail::random_direction(mb.p, mb.q, rng);
      y *= 0.5 / Eigen::JacobiSVD<Eigen::MatrixXd>(y).singularValues()(0);
      Eigen::MatrixXd g(mb.p + mb.q, mb.q);
      g << y, Eigen::MatrixXd::Identity(mb.q, mb.q);
      net.push_back(DualGrassmannPoint::canonicalize(chart.frame * g));
    }
  } else {
    const auto& pd = *domain.as<PDConeDomain>();
    radius = std::atan(0.5 / std::sqrt(double(pd.d)));
    for (int k = 0; k < 16; ++k) {
      Eigen::MatrixXd e = detail::random_direction(pd.d, pd.d, rng);
      e = 0.5 * (e + e.transpose());
      e -= e.trace() / pd.d * Eigen::MatrixXd::Identity(pd.d, pd.d);
      e *= 0.5 / e.norm();
      net.push_back(hyperplane_from_covector(svec(Eigen::MatrixXd::Identity(pd.d, pd.d) + e)));
    }
  }
  c.radius = radius;
  c.valid = radius > 0.0;
  c.margin = std::numeric_limits<double>::infinity();
  for (const auto& xi : net) {
    const Certificate m = dual_membership_certificate(xi, domain, tol);
    if (!m.valid) {
      c.valid = false;
      c.point = m.point;
      c.note = "a dual point near the chart's point at infinity meets the domain";
      return c;
    }
    c.margin = std::min(c.margin, m.margin);
  }
  c.note = "chart point at infinity is interior to the dual";
  return c;
}

// ---------------------------------------------------------------------------
// Dual construction

namespace detail {

/// Best line through x (chart coordinates of a 2-dimensional oracle domain),
/// maximizing the minimum of its unit functional over the samples. Returns the
/// ambient covector, oriented positive at the basepoint, and that minimum.
inline std::pair<Eigen::VectorXd, double> supporting_pencil(const OracleDomain& o, const OracleSampleSet& s,
                                                            const Eigen::VectorXd& x) {
  auto covector_at = [&](double phi) {
    const Eigen::Vector2d n(std::cos(phi), std::sin(phi));
    Eigen::Vector3d fc(-n.dot(x), n(0), n(1));
    if (fc(0) + fc.tail(2).dot(o.basepoint) < 0.0) fc = -fc;
    return Eigen::VectorXd(o.chart.ambient_covector(fc));
  };
  auto score = [&](double phi) { return oracle_min_value(s, covector_at(phi)); };
  const int steps = 720;
  const double h = std::numbers::pi / steps;
  double best_phi = 0.0, best = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < steps; ++k) {
    const double v = score(k * h);
    if (v > best) {
      best = v;
      best_phi = k * h;
    }
  }
  // golden-section refinement around the best grid angle
  double a = best_phi - h, b = best_phi + h;
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c1 = b - gr * (b - a), c2 = a + gr * (b - a);
  double s1 = score(c1), s2 = score(c2);
  for (int it = 0; it < 60; ++it) {
    if (s1 > s2) {
      b = c2;
      c2 = c1;
      s2 = s1;
      c1 = b - gr * (b - a);
      s1 = score(c1);
    } else {
      a = c1;
      c1 = c2;
      s1 = s2;
      c2 = a + gr * (b - a);
      s2 = score(c2);
    }
  }
  if (std::max(s1, s2) > best) {
    best_phi = s1 > s2 ? c1 : c2;
    best = std::max(s1, s2);
  }
  return {covector_at(best_phi), best};
}

inline SampleCloud oracle_dual(const Domain& domain, std::uint64_t seed) {
  const auto& o = *domain.as<OracleDomain>();
  const auto s = detail::oracle_sample_set(domain);
  SampleCloud cloud;
  cloud.resolution = s.spacing;
  cloud.domain_samples = static_cast<int>(s.coords.cols());
  auto admit = [&](const Eigen::VectorXd& f) {
    const double m = oracle_min_value(s, f);
    if (m >= -kSignSlack) {
      cloud.points.push_back(hyperplane_from_covector(f));
      cloud.margins.push_back(std::max(m, 0.0));
    }
  };
  const auto d = o.basepoint.size();
  // point at infinity of the chart
  admit(o.chart.ambient_covector(Eigen::VectorXd::Unit(d + 1, 0)));
  // supporting hyperplanes at boundary samples
  if (d == 2) {
    const Eigen::Index stride = std::max<Eigen::Index>(1, s.boundary.cols() / 128);
    for (Eigen::Index k = 0; k < s.boundary.cols(); k += stride) {
      auto [f, m] = supporting_pencil(o, s, s.boundary.col(k));
      if (m >= -kSignSlack) admit(f);
    }
  }
  // random functionals 1 + w.(u - b), |w| <= 1/rho with rho the inradius at b
  double rho = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < s.boundary.cols(); ++k) rho = std::min(rho, (s.boundary.col(k) - o.basepoint).norm());
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int k = 0; k < 512; ++k) {
    Eigen::VectorXd w = random_direction(static_cast<int>(d), 1, rng) * std::pow(unif(rng), 1.0 / d) / rho;
    Eigen::VectorXd fc(d + 1);
    fc << 1.0 - w.dot(o.basepoint), w;
    admit(o.chart.ambient_covector(fc));
  }
  return cloud;
}

}  // namespace detail

/// The dual domain in the representation matching the domain variant. Throws
/// NotProper when no interior dual point can be certified.
inline DualRepresentation dual_of(const Domain& domain, const Tolerances& tol = {}, std::uint64_t seed = 0) {
  const Certificate proper = properness_certificate(domain, tol);
  if (!proper.valid) fail(ErrorCode::NotProper, domain.name() + ": " + proper.note);
  return std::visit(
      [&](const auto& d) -> DualRepresentation {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, PolytopeDomain>) {
          ExplicitVertices out;
          for (const auto& f : d.facets) {
            Eigen::VectorXd fc(f.normal.size() + 1);
            fc << f.offset, -f.normal;
            out.points.push_back(hyperplane_from_covector(d.chart.ambient_covector(fc), tol));
          }
          return out;
        } else if constexpr (std::is_same_v<T, BallDomain>) {
          return PolarBall::of(d);
        } else if constexpr (std::is_same_v<T, MatrixBallDomain>) {
          return ParametricMatrixBall{d.p, d.q, d.chart};
        } else if constexpr (std::is_same_v<T, PDConeDomain>) {
          return PDConePairing{d.d};
        } else {
          return detail::oracle_dual(domain, seed);
        }
      },
      domain.variant());
}

// ---------------------------------------------------------------------------
// Dual convexity

/// A dual point xi in the dual domain with x on Z_xi, for x a boundary point
/// in chart coordinates. Throws NotDualConvexAt when none is found.
inline Certificate dual_convexity_certificate(const Domain& domain, const Eigen::MatrixXd& x,
                                              const Tolerances& tol = {}, const OracleSampleSet* cache = nullptr) {
  const GrassmannPoint xp = domain.point(x);
  std::optional<DualGrassmannPoint> found;
  std::visit(
      [&](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, PolytopeDomain>) {
          double best = std::numeric_limits<double>::infinity();
          for (const auto& f : d.facets) {
            Eigen::VectorXd fc(f.normal.size() + 1);
            fc << f.offset, -f.normal;
            const DualGrassmannPoint xi = hyperplane_from_covector(d.chart.ambient_covector(fc), tol);
            const double v = pairing(xp, xi);
            if (v < best) {
              best = v;
              found = xi;
            }
          }
        } else if constexpr (std::is_same_v<T, BallDomain>) {
          // tangent hyperplane 1 - (x - c)^T A (u - c) / r^2 = 0
          const Eigen::VectorXd e = x.col(0) - d.center;
          const Eigen::VectorXd w = -d.shape * e / (d.radius * d.radius);
          Eigen::VectorXd fc(w.size() + 1);
          fc << 1.0 - w.dot(d.center), w;
          found = hyperplane_from_covector(d.chart.ambient_covector(fc), tol);
        } else if constexpr (std::is_same_v<T, MatrixBallDomain>) {
          Eigen::JacobiSVD<Eigen::MatrixXd> svd(x, Eigen::ComputeFullU | Eigen::ComputeFullV);
          const Eigen::MatrixXd y = svd.matrixV().col(0) * svd.matrixU().col(0).transpose();
          Eigen::MatrixXd g(d.p + d.q, d.q);
          g << y, Eigen::MatrixXd::Identity(d.q, d.q);
          found = DualGrassmannPoint::canonicalize(d.chart.frame * g, tol);
        } else if constexpr (std::is_same_v<T, PDConeDomain>) {
          Eigen::VectorXd g(x.rows() + 1);
          g << 1.0, x.col(0);
          const Eigen::MatrixXd s = unsvec(d.chart.frame * g, d.d);
          Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
          const Eigen::VectorXd v = es.eigenvectors().col(0);
          found = hyperplane_from_covector(svec(v * v.transpose()), tol);
        } else {
          std::optional<OracleSampleSet> own;
          if (!cache) own = detail::oracle_sample_set(domain);
          const OracleSampleSet& s = cache ? *cache : *own;
          if (d.basepoint.size() == 2) {
            auto [f, m] = detail::supporting_pencil(d, s, x.col(0));
            if (m >= -kSignSlack) found = hyperplane_from_covector(f, tol);
          } else {
            std::mt19937_64 rng(3);
            for (int k = 0; k < 4096 && !found; ++k) {
              const Eigen::VectorXd n = detail::random_direction(static_cast<int>(x.rows()), 1, rng);
              Eigen::VectorXd fc(n.size() + 1);
              fc << -n.dot(x.col(0)), n;
              if (fc(0) + n.dot(d.basepoint) < 0.0) fc = -fc;
              const Eigen::VectorXd f = d.chart.ambient_covector(fc);
              if (detail::oracle_min_value(s, f) >= -kSignSlack) found = hyperplane_from_covector(f, tol);
            }
          }
        }
      },
      domain.variant());
  if (!found) fail(ErrorCode::NotDualConvexAt, "no supporting dual point found at the boundary point");
  Certificate c = dual_membership_certificate(*found, domain, tol, cache);
  const double touch = pairing(xp, *found);
  if (!c.valid || !(touch < tol.rank_tol))
    fail(ErrorCode::NotDualConvexAt, "best candidate dual point has pairing " + std::to_string(touch) +
                                         (c.valid ? "" : " and meets the domain"));
  c.kind = CertificateKind::DualConvexity;
  c.point = x;
  c.note = "boundary point lies on Z_xi with xi in the dual";
  return c;
}

// ---------------------------------------------------------------------------
// Spanning

/// D = dim of the p-th exterior power dual points whose pairing functionals
/// are linearly independent, chosen greedily by largest residual.
inline std::vector<DualGrassmannPoint> spanning_basis(const DualRepresentation& dual, int ambient_dim, int plane_dim,
                                                      const Tolerances& tol = {}, std::uint64_t seed = 0) {
  std::vector<DualGrassmannPoint> candidates;
  std::mt19937_64 rng(seed);
  std::visit(
      [&](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, ExplicitVertices> || std::is_same_v<T, SampleCloud>) {
          candidates = d.points;
        } else {
          for (int k = 0; k < 256; ++k) {
            Eigen::VectorXd theta = d.sample(rng);
            if constexpr (std::is_same_v<T, PolarBall>) theta = theta.normalized();
            candidates.push_back(d.point(theta));
          }
        }
      },
      dual);
  const long dim = binomial(ambient_dim, plane_dim);
  std::vector<Eigen::VectorXd> funcs;
  for (const auto& c : candidates) {
    Eigen::VectorXd f = pairing_functional(c);
    funcs.push_back(f / f.norm());
  }
  std::vector<DualGrassmannPoint> basis;
  std::vector<Eigen::VectorXd> ortho;
  std::vector<bool> used(funcs.size(), false);
  double gram = 1.0;
  for (long k = 0; k < dim; ++k) {
    double best = 0.0;
    std::size_t best_i = funcs.size();
    Eigen::VectorXd best_r;
    for (std::size_t i = 0; i < funcs.size(); ++i) {
      if (used[i]) continue;
      Eigen::VectorXd r = funcs[i];
      for (const auto& q : ortho) r -= q.dot(r) * q;
      if (r.norm() > best) {
        best = r.norm();
        best_i = i;
        best_r = r;
      }
    }
    if (best_i == funcs.size() || best * best < tol.rank_tol)
      fail(ErrorCode::SpanningFailure, "dual samples do not span the dual space");
    used[best_i] = true;
    ortho.push_back(best_r / best);
    basis.push_back(candidates[best_i]);
    gram *= best * best;
  }
  if (!(gram > tol.rank_tol)) fail(ErrorCode::SpanningFailure, "Gram determinant below rank_tol");
  return basis;
}

/// Gram determinant of the unit pairing functionals of `points`.
inline double gram_determinant(const std::vector<DualGrassmannPoint>& points) {
  if (points.empty()) return 0.0;
  Eigen::MatrixXd f(pairing_functional(points.front()).size(), static_cast<Eigen::Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) f.col(i) = pairing_functional(points[i]).normalized();
  return (f.transpose() * f).determinant();
}

}  // namespace flagmetric

#endif  // FLAGMETRIC_DUALITY_HPP
