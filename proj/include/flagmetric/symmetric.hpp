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

#ifndef FLAGMETRIC_SYMMETRIC_HPP
#define FLAGMETRIC_SYMMETRIC_HPP

// Automorphisms of the matrix balls B_{p,q} (identity component of O(p,q))
// and of the positive-definite cone (SL_d acting by congruence).

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <cstdint>
#include <random>

#include "flagmetric/geometry.hpp"

namespace flagmetric {

/// J = diag(I_p, -I_q).
inline Eigen::MatrixXd indefinite_form(int p, int q) {
  Eigen::VectorXd d(p + q);
  d.head(p).setOnes();
  d.tail(q).setConstant(-1.0);
  return d.asDiagonal();
}

/// Element of SO_0(p, q): g^T J g = J.
struct IndefiniteOrthogonalElement {
  Eigen::MatrixXd g;
  int p = 0;
  int q = 0;

  double form_residual() const {
    const Eigen::MatrixXd j = indefinite_form(p, q);
    return (g.transpose() * j * g - j).norm();
  }
};

/// Element of SL_d(R), acting on symmetric matrices by X -> g X g^T.
struct PDConeElement {
  Eigen::MatrixXd g;

  /// Rescales an invertible matrix to unit determinant. Matrices with negative
  /// determinant in even dimension have no such rescaling.
  static PDConeElement normalized(const Eigen::MatrixXd& m) {
    const double det = m.determinant();
    const auto d = m.rows();
    if (det == 0.0 || !std::isfinite(det)) fail(ErrorCode::RankDeficient, "singular congruence matrix");
    if (det < 0.0 && d % 2 == 0) fail(ErrorCode::ValidationError, "negative determinant in even dimension");
    const double scale = std::copysign(std::pow(std::abs(det), 1.0 / double(d)), det);
    return PDConeElement{m / scale};
  }
};

/// exp of a random element of so(p, q) whose symmetric (boost) block has
/// Frobenius norm `scale`; the rotation blocks are scaled to the same size.
inline IndefiniteOrthogonalElement sample_automorphism(int p, int q, double scale, std::uint64_t seed) {
  if (p < 1 || q < 1) fail(ErrorCode::InvalidDimension, "p, q must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  const int n = p + q;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(p, p), d = Eigen::MatrixXd::Zero(q, q), b(p, q);
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j) {
      a(i, j) = gauss(rng);
      a(j, i) = -a(i, j);
    }
  for (int i = 0; i < q; ++i)
    for (int j = i + 1; j < q; ++j) {
      d(i, j) = gauss(rng);
      d(j, i) = -d(i, j);
    }
  for (Eigen::Index i = 0; i < b.size(); ++i) b.data()[i] = gauss(rng);
  auto rescale = [scale](Eigen::MatrixXd& m) {
    const double norm = m.norm();
    if (norm > 0.0) m *= scale / norm;
  };
  rescale(a);
  rescale(b);
  rescale(d);
  Eigen::MatrixXd zeta(n, n);
  zeta << a, b, b.transpose(), d;
  return IndefiniteOrthogonalElement{zeta.exp(), p, q};
}

/// [[cosh t, sinh t], [sinh t, cosh t]] acting on coordinates (axis, p+other),
/// embedded in SO_0(p, q).
inline IndefiniteOrthogonalElement boost(int p, int q, int space_axis, int time_axis, double t) {
  IndefiniteOrthogonalElement out{Eigen::MatrixXd::Identity(p + q, p + q), p, q};
  const int i = space_axis;
  const int j = p + time_axis;
  out.g(i, i) = out.g(j, j) = std::cosh(t);
  out.g(i, j) = out.g(j, i) = std::sinh(t);
  return out;
}

inline GrassmannPoint act(const Eigen::MatrixXd& g, const GrassmannPoint& x, const Tolerances& tol = {}) {
  if (g.rows() != g.cols() || g.rows() != x.ambient_dim())
    fail(ErrorCode::DimensionMismatch, "group element does not act on this Grassmannian");
  return GrassmannPoint::canonicalize(g * x.rep(), tol);
}

/// g in SO_0(p, q) with act(g, [I; 0]) = [I; X], assembled from the SVD of X
/// as commuting hyperbolic rotations by artanh of the singular values.
inline IndefiniteOrthogonalElement transitivity_witness(int p, int q, const Eigen::MatrixXd& x) {
  if (x.rows() != q || x.cols() != p) fail(ErrorCode::DimensionMismatch, "X must be q x p");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(x, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  if (sigma.size() > 0 && sigma(0) >= 1.0) fail(ErrorCode::NotInDomain, "sigma_max(X) >= 1");
  const int k = static_cast<int>(sigma.size());
  Eigen::MatrixXd cp = Eigen::MatrixXd::Identity(p, p);
  Eigen::MatrixXd cq = Eigen::MatrixXd::Identity(q, q);
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(q, p);
  for (int i = 0; i < k; ++i) {
    const double t = std::atanh(sigma(i));
    cp(i, i) = cq(i, i) = std::cosh(t);
    s(i, i) = std::sinh(t);
  }
  Eigen::MatrixXd hyperbolic(p + q, p + q);
  hyperbolic << cp, s.transpose(), s, cq;
  Eigen::MatrixXd frame = Eigen::MatrixXd::Zero(p + q, p + q);
  frame.topLeftCorner(p, p) = svd.matrixV();
  frame.bottomRightCorner(q, q) = svd.matrixU();
  // frame lies in O(p) x O(q), and conjugation preserves the identity component.
  return IndefiniteOrthogonalElement{frame * hyperbolic * frame.transpose(), p, q};
}

// ---------------------------------------------------------------------------
// Positive-definite cone

/// Dimension of the space of symmetric d x d matrices.
inline int sym_dim(int d) { return d * (d + 1) / 2; }

/// Isometric vectorization: diagonal entries, then sqrt(2) * off-diagonal
/// entries (i < j), row by row. svec(A).dot(svec(B)) == trace(A B).
inline Eigen::VectorXd svec(const Eigen::MatrixXd& s) {
  const int d = static_cast<int>(s.rows());
  Eigen::VectorXd out(sym_dim(d));
  int k = 0;
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) out(k++) = i == j ? s(i, i) : std::sqrt(2.0) * 0.5 * (s(i, j) + s(j, i));
  return out;
}

inline Eigen::MatrixXd unsvec(const Eigen::VectorXd& v, int d) {
  if (v.size() != sym_dim(d)) fail(ErrorCode::DimensionMismatch, "svec length does not match d");
  Eigen::MatrixXd out(d, d);
  int k = 0;
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) {
      if (i == j)
        out(i, i) = v(k++);
      else
        out(i, j) = out(j, i) = v(k++) / std::sqrt(2.0);
    }
  return out;
}

inline bool is_positive_definite(const Eigen::MatrixXd& s) {
  if (!s.allFinite()) return false;
  Eigen::LLT<Eigen::MatrixXd> llt(0.5 * (s + s.transpose()));
  return llt.info() == Eigen::Success;
}

/// [g X g^T], rescaled to unit trace.
inline Eigen::MatrixXd pd_cone_act(const PDConeElement& g, const Eigen::MatrixXd& x) {
  if (g.g.rows() != x.rows() || x.rows() != x.cols()) fail(ErrorCode::DimensionMismatch, "size mismatch");
  if (!is_positive_definite(x)) fail(ErrorCode::NotPD, "representative is not positive definite");
  Eigen::MatrixXd y = g.g * x * g.g.transpose();
  y = 0.5 * (y + y.transpose());
  return y / y.trace();
}

/// Matrix of X -> g X g^T in svec coordinates, so congruence can be fed to
/// the generic Grassmannian action.
inline Eigen::MatrixXd congruence_matrix(const Eigen::MatrixXd& g) {
  const int d = static_cast<int>(g.rows());
  const int n = sym_dim(d);
  Eigen::MatrixXd out(n, n);
  for (int k = 0; k < n; ++k) {
    const Eigen::MatrixXd basis = unsvec(Eigen::VectorXd::Unit(n, k), d);
    out.col(k) = svec(g * basis * g.transpose());
  }
  return out;
}

}  // namespace flagmetric

#endif  // FLAGMETRIC_SYMMETRIC_HPP
