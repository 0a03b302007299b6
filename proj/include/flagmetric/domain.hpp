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

#ifndef FLAGMETRIC_DOMAIN_HPP
#define FLAGMETRIC_DOMAIN_HPP

// Proper domains in Gr_p(R^n) described in an affine chart: polytopes and
// ellipsoids in projective space, the matrix balls B_{p,q}, the cone of
// positive-definite matrices, and membership oracles.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "flagmetric/geometry.hpp"
#include "flagmetric/symmetric.hpp"

namespace flagmetric {

/// Affine chart Gr_p(R^n) - Z_eta. Points are graphs frame * [I_p; X] with
/// X an (n-p) x p coordinate matrix; eta is spanned by the last n-p frame
/// columns.
struct ChartSpec {
  Eigen::MatrixXd frame;
  int plane_dim = 1;

  static ChartSpec standard(int n, int p = 1) { return ChartSpec{Eigen::MatrixXd::Identity(n, n), p}; }

  static ChartSpec from_frame(const Eigen::MatrixXd& f, int p) {
    if (f.rows() != f.cols() || p < 1 || p >= f.rows())
      fail(ErrorCode::InvalidDimension, "chart frame must be square with 1 <= p < n");
    if ((f.transpose() * f - Eigen::MatrixXd::Identity(f.rows(), f.cols())).norm() > 1e-9)
      fail(ErrorCode::ValidationError, "chart frame must be orthogonal");
    return ChartSpec{f, p};
  }

  /// Projective chart whose origin is the line through `origin`; the point
  /// at infinity is the hyperplane orthogonal to it.
  static ChartSpec centred_on(const Eigen::VectorXd& origin) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr{Eigen::MatrixXd(origin.normalized())};
    Eigen::MatrixXd q = qr.householderQ();
    if (q.col(0).dot(origin) < 0.0) q = -q;
    return ChartSpec{q, 1};
  }

  int ambient_dim() const { return static_cast<int>(frame.rows()); }
  int coord_rows() const { return ambient_dim() - plane_dim; }
  int coord_cols() const { return plane_dim; }

  DualGrassmannPoint at_infinity() const {
    return DualGrassmannPoint::canonicalize(frame.rightCols(coord_rows()));
  }

  GrassmannPoint point(const Eigen::MatrixXd& coords, const Tolerances& tol = {}) const {
    if (coords.rows() != coord_rows() || coords.cols() != coord_cols())
      fail(ErrorCode::DimensionMismatch, "chart coordinates have the wrong shape");
    Eigen::MatrixXd graph(ambient_dim(), plane_dim);
    graph << Eigen::MatrixXd::Identity(plane_dim, plane_dim), coords;
    return GrassmannPoint::canonicalize(frame * graph, tol);
  }

  /// Chart coordinates, or nullopt when x lies on Z_eta.
  std::optional<Eigen::MatrixXd> coordinates(const GrassmannPoint& x, const Tolerances& tol = {}) const {
    if (x.ambient_dim() != ambient_dim() || x.plane_dim() != plane_dim)
      fail(ErrorCode::DimensionMismatch, "point does not belong to this chart's Grassmannian");
    const Eigen::MatrixXd z = frame.transpose() * x.rep();
    const Eigen::MatrixXd top = z.topRows(plane_dim);
    const auto lu = top.partialPivLu();
    if (std::abs(lu.determinant()) <= tol.rank_tol) return std::nullopt;
    return Eigen::MatrixXd(z.bottomRows(coord_rows()) * lu.inverse());
  }

  /// Ambient covector of a functional written in chart-frame coordinates.
  Eigen::VectorXd ambient_covector(const Eigen::VectorXd& chart_cov) const { return frame * chart_cov; }
  Eigen::VectorXd chart_covector(const Eigen::VectorXd& ambient_cov) const {
    return frame.transpose() * ambient_cov;
  }
};

/// Facet {u : normal . u = offset} of a polytope with normal . u < offset inside.
struct Facet {
  Eigen::VectorXd normal;
  double offset = 0.0;
};

struct PolytopeDomain {
  ChartSpec chart;
  std::vector<Eigen::VectorXd> vertices;
  std::vector<Facet> facets;
  Eigen::VectorXd centroid;
};

/// {u : (u - c)^T A (u - c) < r^2}.
struct BallDomain {
  ChartSpec chart;
  Eigen::VectorXd center;
  Eigen::MatrixXd shape;
  double radius = 1.0;
};

/// B_{p,q} = {[I; X] : sigma_max(X) < 1} in Gr_p(R^{p+q}).
struct MatrixBallDomain {
  int p = 1;
  int q = 1;
  ChartSpec chart;
};

/// Projectivized positive-definite d x d matrices, in svec coordinates.
struct PDConeDomain {
  int d = 2;
  ChartSpec chart;
};

/// Membership predicate on projective chart coordinates with a search box
/// and an interior basepoint.
struct OracleDomain {
  ChartSpec chart;
  std::function<bool(const Eigen::VectorXd&)> member;
  Eigen::VectorXd box_lo;
  Eigen::VectorXd box_hi;
  Eigen::VectorXd basepoint;
  std::string name;
};

enum class DomainKind { Polytope, Ball, MatrixBall, PDCone, Oracle };

inline const char* to_string(DomainKind k) {
  switch (k) {
    case DomainKind::Polytope: return "polytope";
    case DomainKind::Ball: return "ball";
    case DomainKind::MatrixBall: return "matrix_ball";
    case DomainKind::PDCone: return "pd_cone";
    case DomainKind::Oracle: return "oracle";
  }
  return "unknown";
}

namespace detail {

inline std::vector<Facet> polytope_facets(const std::vector<Eigen::VectorXd>& verts) {
  const int d = static_cast<int>(verts.front().size());
  const int m = static_cast<int>(verts.size());
  double scale = 0.0;
  for (const auto& v : verts) scale = std::max(scale, v.cwiseAbs().maxCoeff());
  const double eps = 1e-12 * std::max(1.0, scale);
  std::vector<Facet> out;
  auto add_if_supporting = [&](Eigen::VectorXd a, double b) {
    int above = 0, below = 0;
    for (const auto& v : verts) {
      const double s = a.dot(v) - b;
      if (s > eps) ++above;
      if (s < -eps) ++below;
    }
    if (above > 0 && below > 0) return;
    if (above > 0) {
      a = -a;
      b = -b;
    }
    for (const auto& f : out)
      if ((f.normal - a).norm() < 1e-9 && std::abs(f.offset - b) < 1e-9 * std::max(1.0, std::abs(b))) return;
    out.push_back(Facet{a, b});
  };
  if (d == 1) {
    for (const auto& v : verts) add_if_supporting(Eigen::VectorXd::Ones(1), v(0));
    return out;
  }
  if (m < d) return out;
  std::vector<int> idx(d);
  for (int i = 0; i < d; ++i) idx[i] = i;
  bool done = false;
  while (!done) {
    Eigen::MatrixXd rows(d - 1, d);
    for (int k = 1; k < d; ++k) rows.row(k - 1) = (verts[idx[k]] - verts[idx[0]]).transpose();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(rows, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    if (s.size() == d - 1 && s(d - 2) > 1e-10 * std::max(1.0, s(0))) {
      Eigen::VectorXd a = svd.matrixV().col(d - 1);
      add_if_supporting(a, a.dot(verts[idx[0]]));
    }
    next_subset(idx, m, done);
  }
  return out;
}

/// Largest t in [lo, hi] with inside(t) (to full precision) given inside(lo)
/// and !inside(hi).
template <class Pred>
std::pair<double, double> bisect_boundary(Pred&& inside, double lo, double hi) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (inside(mid))
      lo = mid;
    else
      hi = mid;
  }
  return {lo, hi};
}

}  // namespace detail

class Domain {
 public:
  using Variant = std::variant<PolytopeDomain, BallDomain, MatrixBallDomain, PDConeDomain, OracleDomain>;

  explicit Domain(Variant v) : v_(std::move(v)) {}

  /// Convex hull of `vertices` in the projective chart. Rejects hulls that are
  /// not full-dimensional.
  static Domain polytope(std::vector<Eigen::VectorXd> vertices, std::optional<ChartSpec> chart = std::nullopt) {
    if (vertices.empty()) fail(ErrorCode::ValidationError, "polytope needs vertices");
    const auto d = vertices.front().size();
    if (d < 1) fail(ErrorCode::ValidationError, "polytope vertices must have dimension >= 1");
    for (const auto& v : vertices) {
      if (v.size() != d) fail(ErrorCode::ValidationError, "polytope vertices differ in dimension");
      if (!v.allFinite()) fail(ErrorCode::ValidationError, "polytope vertex is not finite");
    }
    Eigen::MatrixXd diffs(vertices.size(), d);
    for (std::size_t i = 0; i < vertices.size(); ++i) diffs.row(i) = (vertices[i] - vertices[0]).transpose();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(diffs);
    lu.setThreshold(1e-10);
    if (lu.rank() < d) fail(ErrorCode::ValidationError, "polytope is not full-dimensional");
    PolytopeDomain poly;
    poly.chart = chart.value_or(ChartSpec::standard(static_cast<int>(d) + 1, 1));
    if (poly.chart.ambient_dim() != d + 1 || poly.chart.plane_dim != 1)
      fail(ErrorCode::ValidationError, "chart does not match vertex dimension");
    poly.facets = detail::polytope_facets(vertices);
    poly.centroid = Eigen::VectorXd::Zero(d);
    for (const auto& v : vertices) poly.centroid += v;
    poly.centroid /= double(vertices.size());
    poly.vertices = std::move(vertices);
    return Domain(std::move(poly));
  }

  static Domain ball(Eigen::VectorXd center, Eigen::MatrixXd shape, double radius,
                     std::optional<ChartSpec> chart = std::nullopt) {
    const auto d = center.size();
    if (d < 1) fail(ErrorCode::ValidationError, "ball center must be nonempty");
    if (shape.rows() != d || shape.cols() != d) fail(ErrorCode::ValidationError, "ball shape must be d x d");
    if ((shape - shape.transpose()).norm() > 1e-12 * std::max(1.0, shape.norm()) || !is_positive_definite(shape))
      fail(ErrorCode::ValidationError, "ball shape must be symmetric positive definite");
    if (!(radius > 0.0) || !std::isfinite(radius)) fail(ErrorCode::ValidationError, "ball radius must be positive");
    BallDomain b{chart.value_or(ChartSpec::standard(static_cast<int>(d) + 1, 1)), std::move(center),
                 std::move(shape), radius};
    if (b.chart.ambient_dim() != d + 1 || b.chart.plane_dim != 1)
      fail(ErrorCode::ValidationError, "chart does not match ball dimension");
    return Domain(std::move(b));
  }

  static Domain unit_disk() { return ball(Eigen::Vector2d::Zero(), Eigen::Matrix2d::Identity(), 1.0); }

  static Domain matrix_ball(int p, int q) {
    if (p < 1 || q < 1) fail(ErrorCode::ValidationError, "matrix ball needs p, q >= 1");
    return Domain(MatrixBallDomain{p, q, ChartSpec::standard(p + q, p)});
  }

  static Domain pd_cone(int d) {
    if (d < 2) fail(ErrorCode::ValidationError, "pd cone needs d >= 2");
    return Domain(PDConeDomain{d, ChartSpec::centred_on(svec(Eigen::MatrixXd::Identity(d, d)))});
  }

  static Domain oracle(std::function<bool(const Eigen::VectorXd&)> member, Eigen::VectorXd box_lo,
                       Eigen::VectorXd box_hi, Eigen::VectorXd basepoint, std::string name,
                       std::optional<ChartSpec> chart = std::nullopt) {
    const auto d = basepoint.size();
    if (box_lo.size() != d || box_hi.size() != d) fail(ErrorCode::ValidationError, "oracle box dimension mismatch");
    if (!member(basepoint)) fail(ErrorCode::ValidationError, "oracle basepoint is not a member");
    OracleDomain o{chart.value_or(ChartSpec::standard(static_cast<int>(d) + 1, 1)), std::move(member),
                   std::move(box_lo), std::move(box_hi), std::move(basepoint), std::move(name)};
    return Domain(std::move(o));
  }

  /// [-1,1]^2 with the open quadrant (0,1)x(0,1) removed; reflex corner at 0.
  static Domain lshape() {
    auto member = [](const Eigen::VectorXd& u) {
      return std::abs(u(0)) < 1.0 && std::abs(u(1)) < 1.0 && (u(0) < 0.0 || u(1) < 0.0);
    };
    return oracle(member, Eigen::Vector2d(-1, -1), Eigen::Vector2d(1, 1), Eigen::Vector2d(-0.5, -0.5), "lshape");
  }

  /// {|u_2| < 1}: not bounded in its chart, so not proper.
  static Domain strip(double extent = 1e8) {
    auto member = [](const Eigen::VectorXd& u) { return std::abs(u(1)) < 1.0; };
    return oracle(member, Eigen::Vector2d(-extent, -1), Eigen::Vector2d(extent, 1), Eigen::Vector2d::Zero(),
                  "strip");
  }

  /// Projectivized open positive orthant of R^n: a simplex, in the chart
  /// centred on (1, ..., 1) so that diagonal maps act without leaving it.
  static Domain positive_orthant(int n) {
    if (n < 2) fail(ErrorCode::InvalidDimension, "positive orthant needs n >= 2");
    const ChartSpec chart = ChartSpec::centred_on(Eigen::VectorXd::Ones(n));
    std::vector<Eigen::VectorXd> vertices;
    for (int i = 0; i < n; ++i) vertices.push_back(*chart.coordinates(projective_point(Eigen::VectorXd::Unit(n, i))));
    return polytope(std::move(vertices), chart);
  }

  DomainKind kind() const { return static_cast<DomainKind>(v_.index()); }
  const Variant& variant() const { return v_; }
  template <class T>
  const T* as() const {
    return std::get_if<T>(&v_);
  }

  const ChartSpec& chart() const {
    return std::visit([](const auto& d) -> const ChartSpec& { return d.chart; }, v_);
  }
  int ambient_dim() const { return chart().ambient_dim(); }
  int plane_dim() const { return chart().plane_dim; }
  bool is_projective() const { return plane_dim() == 1; }
  int coord_rows() const { return chart().coord_rows(); }
  int coord_cols() const { return chart().coord_cols(); }

  std::string name() const {
    if (const auto* o = as<OracleDomain>()) return o->name;
    return to_string(kind());
  }

  GrassmannPoint point(const Eigen::MatrixXd& coords) const { return chart().point(coords); }

  bool contains_coords(const Eigen::MatrixXd& x) const {
    if (x.rows() != coord_rows() || x.cols() != coord_cols() || !x.allFinite()) return false;
    return std::visit([&](const auto& d) { return member(d, x); }, v_);
  }

  bool contains(const GrassmannPoint& x) const {
    const auto c = chart().coordinates(x);
    return c && contains_coords(*c);
  }

  std::optional<Eigen::MatrixXd> coordinates(const GrassmannPoint& x) const { return chart().coordinates(x); }

  Eigen::MatrixXd basepoint_coords() const {
    return std::visit(
        [&](const auto& d) -> Eigen::MatrixXd {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, PolytopeDomain>) return d.centroid;
          if constexpr (std::is_same_v<T, BallDomain>) return d.center;
          if constexpr (std::is_same_v<T, MatrixBallDomain>) return Eigen::MatrixXd::Zero(d.q, d.p);
          if constexpr (std::is_same_v<T, PDConeDomain>) return Eigen::VectorXd::Zero(sym_dim(d.d) - 1);
          if constexpr (std::is_same_v<T, OracleDomain>) return d.basepoint;
        },
        v_);
  }

  GrassmannPoint basepoint() const { return point(basepoint_coords()); }

  /// Symmetric matrix represented by a point of the PD-cone domain, scaled to
  /// unit trace.
  Eigen::MatrixXd pd_matrix(const GrassmannPoint& x) const {
    const auto* pd = as<PDConeDomain>();
    if (!pd) fail(ErrorCode::ValidationError, "not a pd_cone domain");
    Eigen::MatrixXd s = unsvec(x.rep().col(0), pd->d);
    return s / s.trace();
  }

  GrassmannPoint pd_point(const Eigen::MatrixXd& s) const {
    const auto* pd = as<PDConeDomain>();
    if (!pd) fail(ErrorCode::ValidationError, "not a pd_cone domain");
    if (s.rows() != pd->d || s.cols() != pd->d) fail(ErrorCode::DimensionMismatch, "matrix size differs from d");
    return projective_point(svec(s));
  }

 private:
  static bool member(const PolytopeDomain& d, const Eigen::MatrixXd& x) {
    const Eigen::VectorXd u = x.col(0);
    for (const auto& f : d.facets)
      if (!(f.normal.dot(u) < f.offset)) return false;
    return true;
  }
  static bool member(const BallDomain& d, const Eigen::MatrixXd& x) {
    const Eigen::VectorXd e = x.col(0) - d.center;
    return e.dot(d.shape * e) < d.radius * d.radius;
  }
  static bool member(const MatrixBallDomain&, const Eigen::MatrixXd& x) {
    return Eigen::JacobiSVD<Eigen::MatrixXd>(x).singularValues()(0) < 1.0;
  }
  static bool member(const PDConeDomain& d, const Eigen::MatrixXd& x) {
    Eigen::VectorXd graph(x.rows() + 1);
    graph << 1.0, x.col(0);
    return is_positive_definite(unsvec(d.chart.frame * graph, d.d));
  }
  static bool member(const OracleDomain& d, const Eigen::MatrixXd& x) { return d.member(x.col(0)); }

  Variant v_;
};

// ---------------------------------------------------------------------------
// Rays

/// Exit of the ray from + s * dir (s > 0) through the boundary. `inside` is the
/// largest parameter known to be inside (equal to `boundary` for closed-form
/// exits); `bounded` is false when the ray never leaves the domain (or the
/// oracle's search box).
struct RayExit {
  double inside = 0.0;
  double boundary = 0.0;
  bool bounded = true;
};

inline RayExit ray_exit(const Domain& domain, const Eigen::MatrixXd& from, const Eigen::MatrixXd& dir) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  const double dn = dir.norm();
  if (!(dn > 0.0)) fail(ErrorCode::ValidationError, "ray direction must be nonzero");
  auto inside_at = [&](double s) { return domain.contains_coords(from + s * dir); };
  auto bisect_from_doubling = [&](double scale) -> RayExit {
    double lo = 0.0, hi = scale;
    int guard = 0;
    while (inside_at(hi)) {
      lo = hi;
      hi *= 2.0;
      if (++guard > 200) return RayExit{lo, inf, false};
    }
    auto [in, out] = detail::bisect_boundary(inside_at, lo, hi);
    return RayExit{in, out, true};
  };
  return std::visit(
      [&](const auto& d) -> RayExit {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, PolytopeDomain>) {
          const Eigen::VectorXd u = from.col(0), v = dir.col(0);
          double s = inf;
          for (const auto& f : d.facets) {
            const double rate = f.normal.dot(v);
            if (rate > 0.0) s = std::min(s, (f.offset - f.normal.dot(u)) / rate);
          }
          return RayExit{s, s, std::isfinite(s)};
        } else if constexpr (std::is_same_v<T, BallDomain>) {
          const Eigen::VectorXd e = from.col(0) - d.center, v = dir.col(0);
          const double a2 = v.dot(d.shape * v);
          const double a1 = v.dot(d.shape * e);
          const double a0 = e.dot(d.shape * e) - d.radius * d.radius;
          const double disc = std::sqrt(std::max(0.0, a1 * a1 - a2 * a0));
          const double s = a1 > 0.0 ? -a0 / (a1 + disc) : (disc - a1) / a2;
          return RayExit{s, s, true};
        } else if constexpr (std::is_same_v<T, PDConeDomain>) {
          Eigen::VectorXd g0(from.rows() + 1), g1(from.rows() + 1);
          g0 << 1.0, from.col(0);
          g1 << 0.0, dir.col(0);
          const Eigen::MatrixXd s0 = unsvec(d.chart.frame * g0, d.d);
          const Eigen::MatrixXd s1 = unsvec(d.chart.frame * g1, d.d);
          Eigen::LLT<Eigen::MatrixXd> llt(s0);
          if (llt.info() != Eigen::Success) return RayExit{0.0, 0.0, true};
          const Eigen::MatrixXd linv = llt.matrixL().solve(Eigen::MatrixXd::Identity(d.d, d.d));
          const Eigen::MatrixXd m = linv * s1 * linv.transpose();
          const double lmin = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(0.5 * (m + m.transpose())).eigenvalues()(0);
          if (lmin >= 0.0) return RayExit{inf, inf, false};
          const double s = -1.0 / lmin;
          return RayExit{s, s, true};
        } else if constexpr (std::is_same_v<T, MatrixBallDomain>) {
          return bisect_from_doubling(1.0 / dn);
        } else {
          // March through the search box so the first exit is found even for
          // non-convex domains, then bisect.
          const Eigen::VectorXd u = from.col(0), v = dir.col(0);
          double s_box = inf;
          for (Eigen::Index i = 0; i < u.size(); ++i) {
            if (v(i) > 0.0) s_box = std::min(s_box, (d.box_hi(i) - u(i)) / v(i));
            if (v(i) < 0.0) s_box = std::min(s_box, (d.box_lo(i) - u(i)) / v(i));
          }
          s_box = std::max(s_box, 0.0) * (1.0 + 1e-9) + 1e-12;
          const int steps = 1024;
          const double h = s_box / steps;
          double prev = 0.0;
          for (int k = 1; k <= steps; ++k) {
            const double s = k * h;
            if (!inside_at(s)) {
              auto [in, out] = detail::bisect_boundary(inside_at, prev, s);
              return RayExit{in, out, true};
            }
            prev = s;
          }
          return RayExit{prev, inf, false};
        }
      },
      domain.variant());
}

// ---------------------------------------------------------------------------
// Sampling

struct BoundaryPoint {
  Eigen::MatrixXd coords;
  Eigen::MatrixXd direction;
  GrassmannPoint point;
};

namespace detail {

template <class Rng>
Eigen::MatrixXd random_direction(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = gauss(rng);
  return m / m.norm();
}

}  // namespace detail

/// Ray directions from the basepoint: evenly spaced angles in 2-dimensional
/// charts (starting at angle 0 for seed 0, rotated by a seeded offset
/// otherwise), alternating signs in 1-dimensional charts, random otherwise.
inline std::vector<Eigen::MatrixXd> ray_directions(const Domain& domain, int count, std::uint64_t seed) {
  std::vector<Eigen::MatrixXd> out;
  const int rows = domain.coord_rows(), cols = domain.coord_cols();
  std::mt19937_64 rng(seed);
  if (rows * cols == 2) {
    const double offset =
        seed == 0 ? 0.0 : std::uniform_real_distribution<double>(0.0, 2.0 * std::numbers::pi / count)(rng);
    for (int k = 0; k < count; ++k) {
      const double a = offset + 2.0 * std::numbers::pi * k / count;
      Eigen::MatrixXd m(rows, cols);
      m(0) = std::cos(a);
      m(1) = std::sin(a);
      out.push_back(m);
    }
  } else if (rows * cols == 1) {
    for (int k = 0; k < count; ++k) out.push_back(Eigen::MatrixXd::Constant(1, 1, k % 2 == 0 ? 1.0 : -1.0));
  } else {
    for (int k = 0; k < count; ++k) out.push_back(detail::random_direction(rows, cols, rng));
  }
  return out;
}

/// Boundary points along rays from the interior basepoint. Rays that never
/// leave the domain are skipped.
inline std::vector<BoundaryPoint> boundary_sample(const Domain& domain, int count, std::uint64_t seed) {
  if (count < 1) fail(ErrorCode::ValidationError, "count must be >= 1");
  const Eigen::MatrixXd base = domain.basepoint_coords();
  std::vector<BoundaryPoint> out;
  for (const auto& dir : ray_directions(domain, count, seed)) {
    const RayExit e = ray_exit(domain, base, dir);
    if (!e.bounded) continue;
    Eigen::MatrixXd c = base + e.inside * dir;
    out.push_back(BoundaryPoint{c, dir, domain.point(c)});
  }
  return out;
}

/// `count` interior points (chart coordinates), drawn from a seeded generator.
inline std::vector<Eigen::MatrixXd> domain_samples(const Domain& domain, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::exponential_distribution<double> expo(1.0);
  std::normal_distribution<double> gauss;
  std::vector<Eigen::MatrixXd> out;
  out.reserve(count);
  std::visit(
      [&](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        for (int i = 0; i < count; ++i) {
          if constexpr (std::is_same_v<T, PolytopeDomain>) {
            Eigen::VectorXd u = Eigen::VectorXd::Zero(d.centroid.size());
            double total = 0.0;
            for (const auto& v : d.vertices) {
              const double w = expo(rng);
              u += w * v;
              total += w;
            }
            out.push_back(u / total);
          } else if constexpr (std::is_same_v<T, BallDomain>) {
            const auto dim = d.center.size();
            Eigen::VectorXd g = detail::random_direction(static_cast<int>(dim), 1, rng);
            const double rad = d.radius * std::pow(unif(rng), 1.0 / double(dim)) * 0.999;
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(d.shape);
            const Eigen::MatrixXd inv_sqrt = es.operatorInverseSqrt();
            out.push_back(Eigen::VectorXd(d.center + rad * inv_sqrt * g));
          } else if constexpr (std::is_same_v<T, MatrixBallDomain>) {
            Eigen::MatrixXd g = detail::random_direction(d.q, d.p, rng);
            const double smax = Eigen::JacobiSVD<Eigen::MatrixXd>(g).singularValues()(0);
            out.push_back(g / smax * std::pow(unif(rng), 1.0 / double(d.p * d.q)) * 0.999);
          } else if constexpr (std::is_same_v<T, PDConeDomain>) {
            Eigen::MatrixXd g(d.d, d.d);
            for (Eigen::Index k = 0; k < g.size(); ++k) g.data()[k] = gauss(rng);
            Eigen::MatrixXd s = g * g.transpose() + 0.05 * Eigen::MatrixXd::Identity(d.d, d.d);
            out.push_back(*d.chart.coordinates(projective_point(svec(s))));
          } else {
            for (int attempt = 0; attempt < 100000; ++attempt) {
              Eigen::VectorXd u(d.basepoint.size());
              for (Eigen::Index k = 0; k < u.size(); ++k) u(k) = d.box_lo(k) + unif(rng) * (d.box_hi(k) - d.box_lo(k));
              if (d.member(u)) {
                out.push_back(u);
                break;
              }
            }
          }
        }
      },
      domain.variant());
  return out;
}

}  // namespace flagmetric

#endif  // FLAGMETRIC_DOMAIN_HPP
