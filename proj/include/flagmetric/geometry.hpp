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

#ifndef FLAGMETRIC_GEOMETRY_HPP
#define FLAGMETRIC_GEOMETRY_HPP

// Linear-algebraic kernel: points of Grassmannians held as orthonormal
// frames, the determinant pairing between complementary Grassmannians,
// cross-ratios built from it, and nested flags.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "flagmetric/errors.hpp"

namespace flagmetric {

struct Tolerances {
  double rank_tol = 1e-10;   // relative determinant threshold
  double angle_tol = 1e-9;   // principal-angle equality (radians)
  double opt_tol = 1e-8;     // optimizer convergence

  void validate() const {
    if (!(rank_tol > 0.0) || !(angle_tol > 0.0) || !(opt_tol > 0.0))
      fail(ErrorCode::ValidationError, "tolerances must be strictly positive");
    if (!(rank_tol < 1.0)) fail(ErrorCode::ValidationError, "rank_tol must be < 1");
  }
};

/// A p-dimensional subspace of R^n, stored as an n x p matrix with
/// orthonormal columns. Any two frames of the same span describe the same
/// point; compare with same_subspace(), not with the raw matrices.
class GrassmannPoint {
 public:
  GrassmannPoint() = default;

  /// Orthonormalizes `raw` (thin QR with positive diagonal, so the frame is
  /// an orientation-preserving change of basis of the raw columns).
  static GrassmannPoint canonicalize(const Eigen::MatrixXd& raw, const Tolerances& tol = {}) {
    const auto n = raw.rows();
    const auto p = raw.cols();
    if (p < 1 || p >= n)
      fail(ErrorCode::InvalidDimension,
           "need 1 <= p < n, got n=" + std::to_string(n) + " p=" + std::to_string(p));
    if (!raw.allFinite()) fail(ErrorCode::RankDeficient, "non-finite entries");
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(raw);
    const auto& s = svd.singularValues();
    if (!(s(0) > 0.0) || s(p - 1) < tol.rank_tol * s(0))
      fail(ErrorCode::RankDeficient, "smallest singular value below rank_tol * largest");
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(raw);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, p);
    const Eigen::MatrixXd r = qr.matrixQR().topRows(p).triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < p; ++j)
      if (r(j, j) < 0.0) q.col(j) = -q.col(j);
    GrassmannPoint out;
    out.rep_ = std::move(q);
    return out;
  }

  int ambient_dim() const { return static_cast<int>(rep_.rows()); }
  int plane_dim() const { return static_cast<int>(rep_.cols()); }
  const Eigen::MatrixXd& rep() const { return rep_; }

 private:
  Eigen::MatrixXd rep_;
};

/// A point of the complementary Grassmannian Gr_{n-p}(R^n), the dual flag
/// manifold for Gr_p(R^n).
class DualGrassmannPoint {
 public:
  DualGrassmannPoint() = default;
  explicit DualGrassmannPoint(GrassmannPoint plane) : plane_(std::move(plane)) {}

  static DualGrassmannPoint canonicalize(const Eigen::MatrixXd& raw, const Tolerances& tol = {}) {
    return DualGrassmannPoint(GrassmannPoint::canonicalize(raw, tol));
  }

  const GrassmannPoint& plane() const { return plane_; }
  const Eigen::MatrixXd& rep() const { return plane_.rep(); }
  int ambient_dim() const { return plane_.ambient_dim(); }
  int plane_dim() const { return plane_.plane_dim(); }

 private:
  GrassmannPoint plane_;
};

/// Points of projective space are lines.
using ProjectivePoint = GrassmannPoint;

inline GrassmannPoint projective_point(const Eigen::VectorXd& v, const Tolerances& tol = {}) {
  return GrassmannPoint::canonicalize(v, tol);
}

// ---------------------------------------------------------------------------
// Principal angles

/// Principal angles between two equidimensional subspaces, ascending.
inline Eigen::VectorXd principal_angles(const GrassmannPoint& x, const GrassmannPoint& y) {
  if (x.ambient_dim() != y.ambient_dim() || x.plane_dim() != y.plane_dim())
    fail(ErrorCode::DimensionMismatch, "principal angles need equal ambient and plane dims");
  const Eigen::MatrixXd& a = x.rep();
  const Eigen::MatrixXd& b = y.rep();
  // cosines from a^T b, sines from the residual of b off span(a); pairing
  // them through atan2 keeps small and near-right angles accurate.
  Eigen::VectorXd cosines = Eigen::JacobiSVD<Eigen::MatrixXd>(a.transpose() * b).singularValues();
  Eigen::VectorXd sines =
      Eigen::JacobiSVD<Eigen::MatrixXd>(b - a * (a.transpose() * b)).singularValues();
  const auto p = cosines.size();
  Eigen::VectorXd angles(p);
  for (Eigen::Index i = 0; i < p; ++i) {
    const double c = std::min(1.0, cosines(i));
    const double s = std::min(1.0, sines(p - 1 - i));
    angles(i) = std::atan2(s, c);
  }
  std::sort(angles.data(), angles.data() + p);
  return angles;
}

/// Largest principal angle; a metric on Gr_p(R^n).
inline double grassmann_distance(const GrassmannPoint& x, const GrassmannPoint& y) {
  return principal_angles(x, y).maxCoeff();
}

inline bool same_subspace(const GrassmannPoint& x, const GrassmannPoint& y, const Tolerances& tol = {}) {
  return x.ambient_dim() == y.ambient_dim() && x.plane_dim() == y.plane_dim() &&
         grassmann_distance(x, y) < tol.angle_tol;
}

// ---------------------------------------------------------------------------
// Pairing

namespace detail {

inline void check_complementary(int n_x, int p_x, int n_xi, int p_xi) {
  if (n_x != n_xi || p_x + p_xi != n_x)
    fail(ErrorCode::DimensionMismatch,
         "pairing needs complementary subspaces: (" + std::to_string(n_x) + "," +
             std::to_string(p_x) + ") vs (" + std::to_string(n_xi) + "," + std::to_string(p_xi) +
             ")");
}

inline double concat_det(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd m(a.rows(), a.cols() + b.cols());
  m << a, b;
  return m.partialPivLu().determinant();
}

}  // namespace detail

/// det([rep_x | rep_xi]) for the stored frames. Its sign depends on the
/// frames; ratios in which every point occurs once up and once down do not.
inline double signed_pairing(const GrassmannPoint& x, const DualGrassmannPoint& xi) {
  detail::check_complementary(x.ambient_dim(), x.plane_dim(), xi.ambient_dim(), xi.plane_dim());
  return detail::concat_det(x.rep(), xi.rep());
}

/// |det([rep_x | rep_xi])| in [0, 1]; zero exactly when x and xi are not transverse.
inline double pairing(const GrassmannPoint& x, const DualGrassmannPoint& xi) {
  return std::abs(signed_pairing(x, xi));
}

inline bool is_transverse(const GrassmannPoint& x, const DualGrassmannPoint& xi, const Tolerances& tol = {}) {
  return pairing(x, xi) > tol.rank_tol;
}

/// det([x|xi]) det([y|eta]) / (det([y|xi]) det([x|eta])).
inline double cross_ratio(const GrassmannPoint& x, const GrassmannPoint& y, const DualGrassmannPoint& xi,
                          const DualGrassmannPoint& eta, const Tolerances& tol = {}) {
  if (x.ambient_dim() != y.ambient_dim() || x.plane_dim() != y.plane_dim() ||
      xi.ambient_dim() != eta.ambient_dim() || xi.plane_dim() != eta.plane_dim())
    fail(ErrorCode::DimensionMismatch, "cross_ratio arguments disagree in dimension");
  const double xy_den1 = signed_pairing(y, xi);
  const double xy_den2 = signed_pairing(x, eta);
  if (std::abs(xy_den1) <= tol.rank_tol || std::abs(xy_den2) <= tol.rank_tol)
    fail(ErrorCode::DegeneratePairing, "denominator pairing below rank_tol");
  return signed_pairing(x, xi) * signed_pairing(y, eta) / (xy_den1 * xy_den2);
}

/// Hyperplane ker f as a dual point, framed so that det([v | frame]) = f.v / |f|
/// for every vector v.
inline DualGrassmannPoint hyperplane_from_covector(const Eigen::VectorXd& f, const Tolerances& tol = {}) {
  const auto n = f.size();
  if (n < 2) fail(ErrorCode::InvalidDimension, "covector needs n >= 2");
  const double norm = f.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) fail(ErrorCode::RankDeficient, "zero covector");
  const Eigen::VectorXd unit = f / norm;
  Eigen::HouseholderQR<Eigen::MatrixXd> qr{Eigen::MatrixXd(unit)};
  Eigen::MatrixXd q = qr.householderQ();
  Eigen::MatrixXd frame = q.rightCols(n - 1);
  if (detail::concat_det(unit, frame) < 0.0) frame.col(0) = -frame.col(0);
  return DualGrassmannPoint::canonicalize(frame, tol);
}

namespace detail {

inline void next_subset(std::vector<int>& idx, int n, bool& done) {
  const int k = static_cast<int>(idx.size());
  int i = k - 1;
  while (i >= 0 && idx[i] == n - k + i) --i;
  if (i < 0) {
    done = true;
    return;
  }
  ++idx[i];
  for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
}

}  // namespace detail

inline long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// Coefficients of the linear functional x -> det([x | xi]) on the p-th
/// exterior power, indexed by p-subsets of coordinates in lexicographic order.
/// For hyperplanes (p = 1) this is the covector of xi.
inline Eigen::VectorXd pairing_functional(const DualGrassmannPoint& xi) {
  const int n = xi.ambient_dim();
  const int p = n - xi.plane_dim();
  Eigen::VectorXd out(binomial(n, p));
  std::vector<int> idx(p);
  for (int i = 0; i < p; ++i) idx[i] = i;
  bool done = false;
  Eigen::Index slot = 0;
  while (!done) {
    Eigen::MatrixXd e = Eigen::MatrixXd::Zero(n, p);
    for (int i = 0; i < p; ++i) e(idx[i], i) = 1.0;
    out(slot++) = detail::concat_det(e, xi.rep());
    detail::next_subset(idx, n, done);
  }
  return out;
}

/// Plucker coordinates of x in the same ordering as pairing_functional(), so
/// that signed_pairing(x, xi) == plucker(x).dot(pairing_functional(xi)).
inline Eigen::VectorXd plucker(const GrassmannPoint& x) {
  const int n = x.ambient_dim();
  const int p = x.plane_dim();
  Eigen::VectorXd out(binomial(n, p));
  std::vector<int> idx(p);
  for (int i = 0; i < p; ++i) idx[i] = i;
  bool done = false;
  Eigen::Index slot = 0;
  while (!done) {
    Eigen::MatrixXd minor(p, p);
    for (int i = 0; i < p; ++i) minor.row(i) = x.rep().row(idx[i]);
    out(slot++) = minor.determinant();
    detail::next_subset(idx, n, done);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Flags

/// A nested chain of subspaces V_{d_1} < V_{d_2} < ... in R^n.
class FullFlag {
 public:
  FullFlag() = default;

  FullFlag(std::vector<GrassmannPoint> subspaces, const Tolerances& tol = {}) : subspaces_(std::move(subspaces)) {
    if (subspaces_.empty()) fail(ErrorCode::InvalidDimension, "flag needs at least one subspace");
    n_ = subspaces_.front().ambient_dim();
    for (std::size_t i = 0; i < subspaces_.size(); ++i) {
      const auto& s = subspaces_[i];
      if (s.ambient_dim() != n_) fail(ErrorCode::DimensionMismatch, "flag subspaces differ in ambient dim");
      if (i > 0) {
        const auto& prev = subspaces_[i - 1];
        if (s.plane_dim() <= prev.plane_dim())
          fail(ErrorCode::InvalidDimension, "flag dims must be strictly increasing");
        const Eigen::MatrixXd resid = prev.rep() - s.rep() * (s.rep().transpose() * prev.rep());
        if (resid.norm() > tol.angle_tol * std::sqrt(double(prev.plane_dim())) + 1e-12)
          fail(ErrorCode::ValidationError, "flag subspaces are not nested");
      }
      dims_.push_back(s.plane_dim());
    }
  }

  /// Flag spanned by leading columns of an n x n basis.
  static FullFlag from_basis(const Eigen::MatrixXd& basis, const std::vector<int>& dims, const Tolerances& tol = {}) {
    std::vector<GrassmannPoint> subs;
    for (int d : dims) {
      if (d < 1 || d >= basis.rows()) fail(ErrorCode::InvalidDimension, "flag level out of range");
      subs.push_back(GrassmannPoint::canonicalize(basis.leftCols(d), tol));
    }
    return FullFlag(std::move(subs), tol);
  }

  int ambient_dim() const { return n_; }
  const std::vector<int>& dims() const { return dims_; }
  const std::vector<GrassmannPoint>& subspaces() const { return subspaces_; }

  /// Index of level d, or -1.
  int level_index(int d) const {
    auto it = std::find(dims_.begin(), dims_.end(), d);
    return it == dims_.end() ? -1 : static_cast<int>(it - dims_.begin());
  }

 private:
  int n_ = 0;
  std::vector<int> dims_;
  std::vector<GrassmannPoint> subspaces_;
};

inline GrassmannPoint flag_project(const FullFlag& flag, int d) {
  const int i = flag.level_index(d);
  if (i < 0) fail(ErrorCode::InvalidDimension, "dimension " + std::to_string(d) + " is not a level of the flag");
  return flag.subspaces()[i];
}

/// Pairing at each level d_i of `a` against the level n - d_i of `b`.
inline std::vector<double> flag_pairings(const FullFlag& a, const FullFlag& b) {
  if (a.ambient_dim() != b.ambient_dim()) fail(ErrorCode::DimensionMismatch, "flags live in different spaces");
  const int n = a.ambient_dim();
  std::vector<int> complement;
  for (int d : a.dims()) complement.push_back(n - d);
  std::vector<int> bd = b.dims();
  std::vector<int> sorted_complement = complement;
  std::sort(sorted_complement.begin(), sorted_complement.end());
  if (sorted_complement != bd) fail(ErrorCode::DimensionMismatch, "flag dims are not complementary");
  std::vector<double> out;
  for (std::size_t i = 0; i < a.dims().size(); ++i) {
    const auto& w = b.subspaces()[b.level_index(complement[i])];
    out.push_back(pairing(a.subspaces()[i], DualGrassmannPoint(w)));
  }
  return out;
}

/// Two flags with complementary dims are opposite when every level is
/// transverse to its complementary level.
inline bool flag_transverse(const FullFlag& a, const FullFlag& b, const Tolerances& tol = {}) {
  for (double v : flag_pairings(a, b))
    if (!(v > tol.rank_tol)) return false;
  return true;
}

/// Largest level-wise Grassmann distance between flags with identical dims.
inline double flag_distance(const FullFlag& a, const FullFlag& b) {
  if (a.dims() != b.dims() || a.ambient_dim() != b.ambient_dim())
    fail(ErrorCode::DimensionMismatch, "flags have different dims");
  double out = 0.0;
  for (std::size_t i = 0; i < a.dims().size(); ++i)
    out = std::max(out, grassmann_distance(a.subspaces()[i], b.subspaces()[i]));
  return out;
}

// ---------------------------------------------------------------------------
// Sampling

/// Haar-uniform point of Gr_p(R^n) (QR of a Gaussian matrix).
template <class Rng>
GrassmannPoint random_grassmann(int n, int p, Rng& rng) {
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd m(n, p);
  for (;;) {
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = gauss(rng);
    try {
      return GrassmannPoint::canonicalize(m);
    } catch (const Error&) {
      // measure-zero event; redraw
    }
  }
}

template <class Rng>
Eigen::MatrixXd random_orthogonal(int n, Rng& rng) {
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = gauss(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  Eigen::MatrixXd q = qr.householderQ();
  for (int j = 0; j < n; ++j)
    if (qr.matrixQR()(j, j) < 0.0) q.col(j) = -q.col(j);
  return q;
}

}  // namespace flagmetric

#endif  // FLAGMETRIC_GEOMETRY_HPP
