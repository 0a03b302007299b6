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

#ifndef FLAGMETRIC_RIGIDITY_HPP
#define FLAGMETRIC_RIGIDITY_HPP

// Fibers of the projection from a partial flag manifold to one of its levels
// are compact and always contain flags that fail to be opposite to a given
// reference flag. Hence no fiber fits inside an affine chart, and a bounded
// domain of flags meets each fiber in a set that reaches its boundary.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "flagmetric/geometry.hpp"

namespace flagmetric {

namespace detail {

/// Orthonormal completion of the columns of `a` (assumed orthonormal) to R^n.
inline Eigen::MatrixXd orthonormal_complement(const Eigen::MatrixXd& a) {
  const auto n = a.rows();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr{a};
  const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  return q.rightCols(n - a.cols());
}

/// Orthonormal basis of R^n whose leading columns span each level of the flag.
inline Eigen::MatrixXd adapted_basis(const FullFlag& f) {
  const int n = f.ambient_dim();
  Eigen::MatrixXd basis(n, 0);
  for (const auto& s : f.subspaces()) {
    Eigen::MatrixXd resid = s.rep() - basis * (basis.transpose() * s.rep());
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(resid, Eigen::ComputeThinU);
    const auto add = s.plane_dim() - basis.cols();
    Eigen::MatrixXd grown(n, basis.cols() + add);
    grown << basis, svd.matrixU().leftCols(add);
    basis = grown;
  }
  Eigen::MatrixXd full(n, n);
  full << basis, orthonormal_complement(basis);
  return full;
}

inline void check_flag_dims(int n, const std::vector<int>& dims) {
  if (n < 2) fail(ErrorCode::InvalidDimension, "ambient dimension must be >= 2");
  if (dims.empty()) fail(ErrorCode::InvalidDimension, "flag needs at least one level");
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (dims[i] < 1 || dims[i] >= n) fail(ErrorCode::InvalidDimension, "flag level out of range");
    if (i > 0 && dims[i] <= dims[i - 1]) fail(ErrorCode::InvalidDimension, "flag dims must be increasing");
  }
}

inline std::vector<int> complementary_dims(int n, const std::vector<int>& dims) {
  std::vector<int> out;
  for (int d : dims) out.push_back(n - d);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

/// Flags V with sigma_max(A_i) < r_i at every level, where A_i is the graph
/// coordinate of V_{d_i} over the complement of the reference level W_{n-d_i}.
struct FlagDomainSpec {
  int n = 0;
  std::vector<int> dims;
  std::vector<double> radii;
  FullFlag reference;

  static FlagDomainSpec make(int n, std::vector<int> dims, std::vector<double> radii, FullFlag reference) {
    detail::check_flag_dims(n, dims);
    if (radii.size() != dims.size()) fail(ErrorCode::DimensionMismatch, "one radius per level");
    for (double r : radii)
      if (!(r > 0.0) || !std::isfinite(r)) fail(ErrorCode::ValidationError, "radii must be positive and finite");
    if (reference.ambient_dim() != n || reference.dims() != detail::complementary_dims(n, dims))
      fail(ErrorCode::DimensionMismatch, "reference flag must have the complementary dims");
    return FlagDomainSpec{n, std::move(dims), std::move(radii), std::move(reference)};
  }

  /// Reference W_k = span of the last k basis vectors, so the domain is
  /// centred on the standard flag span(e_1) < span(e_1, e_2) < ...
  static FlagDomainSpec standard(int n, std::vector<int> dims, std::vector<double> radii) {
    detail::check_flag_dims(n, dims);
    const Eigen::MatrixXd reversed = Eigen::MatrixXd::Identity(n, n).rowwise().reverse();
    FullFlag ref = FullFlag::from_basis(reversed, detail::complementary_dims(n, dims));
    return make(n, std::move(dims), std::move(radii), std::move(ref));
  }

  const GrassmannPoint& reference_level(int d) const { return reference.subspaces()[reference.level_index(n - d)]; }

  /// Graph coordinate of V over the complement of W_{n-d}; +inf entries when V
  /// meets W_{n-d}.
  Eigen::MatrixXd chart_coordinates(const GrassmannPoint& v) const {
    const int d = v.plane_dim();
    const Eigen::MatrixXd& w = reference_level(d).rep();
    const Eigen::MatrixXd e = detail::orthonormal_complement(w);
    const auto lu = (e.transpose() * v.rep()).fullPivLu();
    if (!lu.isInvertible())
      return Eigen::MatrixXd::Constant(n - d, d, std::numeric_limits<double>::infinity());
    return w.transpose() * v.rep() * lu.inverse();
  }

  std::vector<double> margins(const FullFlag& f) const {
    if (f.ambient_dim() != n || f.dims() != dims) fail(ErrorCode::DimensionMismatch, "flag does not match the spec");
    std::vector<double> out;
    for (std::size_t i = 0; i < dims.size(); ++i) {
      const Eigen::MatrixXd a = chart_coordinates(f.subspaces()[i]);
      const double s = a.allFinite() ? Eigen::JacobiSVD<Eigen::MatrixXd>(a).singularValues()(0)
                                     : std::numeric_limits<double>::infinity();
      out.push_back(radii[i] - s);
    }
    return out;
  }

  double margin(const FullFlag& f) const {
    const auto m = margins(f);
    return *std::min_element(m.begin(), m.end());
  }

  bool contains(const FullFlag& f) const { return margin(f) > 0.0; }
};

/// Flag in the fiber over `base` that is not opposite to `reference`, with
/// the level at which opposition fails.
struct EscapeWitness {
  FullFlag flag;
  int violated_dim = 0;
  double pairing = 0.0;
};

/// Builds the witness by linear algebra. With a level d+ above d, the level
/// d+ is spanned by base, a vector of the reference level W_{n-d+} outside
/// base, and filler; otherwise the level d- below d is taken inside base
/// through a vector of base meeting W_{n-d-}.
inline EscapeWitness fiber_escape_witness(int n, const std::vector<int>& dims, int d, const GrassmannPoint& base,
                                          const FullFlag& reference, const Tolerances& tol = {}) {
  detail::check_flag_dims(n, dims);
  if (dims.size() < 2) fail(ErrorCode::InvalidDimension, "a single-level flag space has no fibers to escape");
  const auto level = std::find(dims.begin(), dims.end(), d);
  if (level == dims.end()) fail(ErrorCode::InvalidDimension, "fiber level is not one of the dims");
  if (base.ambient_dim() != n || base.plane_dim() != d) fail(ErrorCode::DimensionMismatch, "base has the wrong shape");
  if (reference.ambient_dim() != n || reference.dims() != detail::complementary_dims(n, dims))
    fail(ErrorCode::DimensionMismatch, "reference flag must have the complementary dims");
  const Eigen::MatrixXd& b = base.rep();
  Eigen::MatrixXd basis(n, n);
  int violated = 0;
  if (level + 1 != dims.end()) {
    violated = *(level + 1);
    // first reference vector, smallest level first, with the largest part
    // outside base
    const Eigen::MatrixXd& w = reference.subspaces()[reference.level_index(n - violated)].rep();
    Eigen::VectorXd pick;
    for (const auto& sub : reference.subspaces()) {
      if (sub.plane_dim() > n - violated) break;
      for (Eigen::Index j = 0; j < sub.rep().cols() && pick.size() == 0; ++j) {
        const Eigen::VectorXd r = sub.rep().col(j) - b * (b.transpose() * sub.rep().col(j));
        if (r.norm() > 0.5) pick = r.normalized();
      }
      if (pick.size() != 0) break;
    }
    if (pick.size() == 0) {
      // fall back to the reference direction farthest from base
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(w - b * (b.transpose() * w), Eigen::ComputeThinU);
      if (svd.singularValues()(0) > tol.rank_tol) pick = svd.matrixU().col(0);
    }
    Eigen::MatrixXd head(n, d + (pick.size() ? 1 : 0));
    if (pick.size())
      head << b, pick;
    else
      head << b;  // W already lies in base
    basis << head, detail::orthonormal_complement(head);
  } else {
    violated = *(level - 1);
    const Eigen::MatrixXd& w = reference.subspaces()[reference.level_index(n - violated)].rep();
    Eigen::MatrixXd stacked(n, b.cols() + w.cols());
    stacked << b, -w;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(stacked, Eigen::ComputeFullV);
    const Eigen::VectorXd null = svd.matrixV().col(stacked.cols() - 1);
    const Eigen::VectorXd u = (b * null.head(b.cols())).normalized();
    // basis of base starting with u, then the complement of base
    Eigen::MatrixXd in_base(n, d);
    const Eigen::VectorXd coeff = b.transpose() * u;
    Eigen::MatrixXd rest = detail::orthonormal_complement(coeff);
    in_base << u, b * rest;
    basis << in_base, detail::orthonormal_complement(in_base);
  }
  EscapeWitness out{FullFlag::from_basis(basis, dims, tol), violated, 0.0};
  const int i = out.flag.level_index(violated);
  out.pairing = flag_pairings(out.flag, reference)[i];
  if (!(out.pairing < tol.rank_tol)) fail(ErrorCode::NoWitness, "constructed flag is still opposite to the reference");
  if (!same_subspace(flag_project(out.flag, d), base, tol))
    fail(ErrorCode::NoWitness, "constructed flag left the fiber");
  return out;
}

/// Points of a fiber approaching the boundary of a flag domain.
struct FiberDemo {
  std::vector<FullFlag> flags;
  std::vector<double> parameter;
  std::vector<double> margin;
  std::vector<double> distance_to_limit;  // flag_distance to the exit flag
  std::vector<double> projection_drift;   // Grassmann distance of the fixed level to its start
  double exit_parameter = 0.0;
  int fixed_dim = 0;
};

/// Rotates the level adjacent to `fixed_dim` toward the escape witness while
/// keeping the fixed level pointwise, bisects the first exit s* from the
/// domain, and returns flags at s_k = s* (1 - 2^-k), k = 0..steps.
inline FiberDemo fiber_boundary_demo(const FlagDomainSpec& spec, const FullFlag& f0, int steps, int fixed_dim = 0,
                                     const Tolerances& tol = {}) {
  if (steps < 0) fail(ErrorCode::ValidationError, "steps must be >= 0");
  if (fixed_dim == 0) fixed_dim = spec.dims.front();
  const double m0 = spec.margin(f0);
  if (!(m0 > 0.0)) fail(ErrorCode::FiberExitsImmediately, "starting flag is not inside the domain");
  const int n = spec.n, d = fixed_dim;
  const GrassmannPoint base = flag_project(f0, d);
  const EscapeWitness wit = fiber_escape_witness(n, spec.dims, d, base, spec.reference, tol);
  const Eigen::MatrixXd q = detail::adapted_basis(f0);
  const Eigen::MatrixXd wq = detail::adapted_basis(wit.flag);
  const auto level = std::find(spec.dims.begin(), spec.dims.end(), d);
  int ia = 0;
  Eigen::VectorXd toward;
  if (level + 1 != spec.dims.end()) {
    ia = d;                  // first vector beyond the fixed level
    toward = wq.col(d);      // the witness direction added to base
  } else {
    ia = *(level - 1) - 1;   // last vector of the level below, inside base
    toward = wq.col(0);      // the vector of base meeting the reference
  }
  const Eigen::VectorXd a = q.col(ia);
  Eigen::VectorXd bvec = toward - q.leftCols(ia + 1) * (q.leftCols(ia + 1).transpose() * toward);
  if (level + 1 == spec.dims.end()) bvec -= (bvec - q.leftCols(d) * (q.leftCols(d).transpose() * bvec)).eval();
  if (bvec.norm() < 1e-8) {
    // witness direction already aligned; rotate toward the next basis vector
    bvec = q.col(ia + 1);
  }
  bvec.normalize();
  auto flag_at = [&](double s) {
    Eigen::MatrixXd m = q;
    // rotation in the (a, bvec) plane, applied to the moving columns only
    for (Eigen::Index j = (level + 1 != spec.dims.end() ? d : 0); j < n; ++j) {
      if (level + 1 == spec.dims.end() && j >= d) break;
      const Eigen::VectorXd v = q.col(j);
      const double ca = v.dot(a), cb = v.dot(bvec);
      m.col(j) = v + (ca * (std::cos(s) - 1.0) - cb * std::sin(s)) * a + (ca * std::sin(s) + cb * (std::cos(s) - 1.0)) * bvec;
    }
    return FullFlag::from_basis(m, spec.dims, tol);
  };
  auto inside = [&](double s) { return spec.margin(flag_at(s)) > 0.0; };
  // first exit on (0, pi]
  double lo = 0.0, hi = -1.0;
  for (int k = 1; k <= 512; ++k) {
    const double s = std::numbers::pi * k / 512;
    if (!inside(s)) {
      hi = s;
      break;
    }
    lo = s;
  }
  if (hi < 0.0) fail(ErrorCode::NoWitness, "the fiber rotation never leaves the domain");
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (inside(mid) ? lo : hi) = mid;
  }
  FiberDemo out;
  out.exit_parameter = lo;
  out.fixed_dim = d;
  const FullFlag limit = flag_at(lo);
  for (int k = 0; k <= steps; ++k) {
    const double s = k == 0 ? 0.0 : lo * (1.0 - std::ldexp(1.0, -k));
    FullFlag f = k == 0 ? f0 : flag_at(s);
    out.parameter.push_back(s);
    out.margin.push_back(spec.margin(f));
    out.distance_to_limit.push_back(flag_distance(f, limit));
    out.projection_drift.push_back(grassmann_distance(flag_project(f, d), base));
    out.flags.push_back(std::move(f));
  }
  return out;
}

/// Fraction of Haar-random pairs (x, xi) in Gr_p x Gr_{n-p} whose pairing
/// exceeds `threshold`.
inline double opposite_density_check(int n, int p, int samples, std::uint64_t seed, double threshold = 1e-12) {
  if (p < 1 || p >= n) fail(ErrorCode::InvalidDimension, "need 1 <= p < n");
  if (samples < 1) fail(ErrorCode::ValidationError, "samples must be >= 1");
  std::mt19937_64 rng(seed);
  long hits = 0;
  for (int i = 0; i < samples; ++i) {
    const GrassmannPoint x = random_grassmann(n, p, rng);
    const DualGrassmannPoint xi(random_grassmann(n, n - p, rng));
    if (pairing(x, xi) > threshold) ++hits;
  }
  return static_cast<double>(hits) / samples;
}

}  // namespace flagmetric

#endif  // FLAGMETRIC_RIGIDITY_HPP
