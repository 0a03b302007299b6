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

#ifndef FLAGMETRIC_METRICS_HPP
#define FLAGMETRIC_METRICS_HPP

// Invariant metrics on proper domains: the dual cross-ratio metric C, the
// Hilbert metric along lines, the Kobayashi-type metrics c and k, and probes
// built on them (completeness, automorphism invariance).

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "flagmetric/domain.hpp"
#include "flagmetric/duality.hpp"
#include "flagmetric/geometry.hpp"
#include "flagmetric/parallel.hpp"
#include "flagmetric/symmetric.hpp"

namespace flagmetric {

/// Half: C = 1/2 sup |log CR|. Full: no 1/2, the scale of the Hilbert metric.
enum class Convention { Half, Full };

enum class MetricMethod { Exact, Optimized, Sampled };

inline double convention_factor(Convention c) { return c == Convention::Half ? 0.5 : 1.0; }

inline const char* to_string(Convention c) { return c == Convention::Half ? "half" : "full"; }

inline const char* to_string(MetricMethod m) {
  switch (m) {
    case MetricMethod::Exact: return "exact";
    case MetricMethod::Optimized: return "optimized";
    case MetricMethod::Sampled: return "sampled";
  }
  return "unknown";
}

struct OptimizerConfig {
  int starts = 64;
  int max_iters = 500;
  std::uint64_t seed = 0;
  double opt_tol = 1e-8;
  int threads = 0;  // 0: thread_budget()

  void validate() const {
    if (starts < 1) fail(ErrorCode::ValidationError, "starts must be >= 1");
    if (max_iters < 1) fail(ErrorCode::ValidationError, "max_iters must be >= 1");
    if (!(opt_tol > 0.0)) fail(ErrorCode::ValidationError, "opt_tol must be positive");
  }
};

struct MetricValue {
  double value = 0.0;
  std::optional<DualGrassmannPoint> xi;
  std::optional<DualGrassmannPoint> eta;
  MetricMethod method = MetricMethod::Exact;
  double error_bound = 0.0;
  Convention convention = Convention::Half;
};

/// factor * |log |CR(x, y; xi, eta)||, the quantity whose sup over dual pairs
/// defines C.
inline double dual_pair_value(const GrassmannPoint& x, const GrassmannPoint& y, const DualGrassmannPoint& xi,
                              const DualGrassmannPoint& eta, Convention convention = Convention::Half) {
  const double v = std::log(pairing(x, xi)) - std::log(pairing(y, xi)) - std::log(pairing(x, eta)) +
                   std::log(pairing(y, eta));
  return convention_factor(convention) * std::abs(v);
}

namespace detail {

struct AscentResult {
  Eigen::VectorXd theta;
  double value = -std::numeric_limits<double>::infinity();
};

/// Projected gradient ascent with Armijo backtracking. The step doubles after
/// every accepted move and halves after every rejection.
template <class Objective, class Project>
AscentResult projected_ascent(const Objective& f, const Project& project, Eigen::VectorXd theta,
                              const OptimizerConfig& cfg) {
  Eigen::VectorXd grad;
  theta = project(theta);
  double value = f(theta, &grad);
  double step = 1.0;
  for (int it = 0; it < cfg.max_iters; ++it) {
    if (!std::isfinite(value) || !grad.allFinite()) break;
    Eigen::VectorXd next = project(theta + step * grad);
    const double moved = (next - theta).norm();
    if (moved < cfg.opt_tol * (1.0 + theta.norm())) break;
    Eigen::VectorXd next_grad;
    const double next_value = f(next, &next_grad);
    if (std::isfinite(next_value) && next_value >= value + 1e-4 * grad.dot(next - theta)) {
      theta = std::move(next);
      grad = std::move(next_grad);
      value = next_value;
      step *= 2.0;
    } else {
      step *= 0.5;
      if (step < 1e-18) break;
    }
  }
  return {theta, value};
}

/// max - median of the top quartile of per-start optima.
inline double start_dispersion(std::vector<double> values) {
  std::sort(values.begin(), values.end(), std::greater<>());
  const std::size_t top = std::max<std::size_t>(1, values.size() / 4);
  return values.front() - values[top / 2];
}

template <class Family>
std::vector<Eigen::VectorXd> family_starts(const Family& fam, const OptimizerConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  std::vector<Eigen::VectorXd> starts;
  starts.reserve(cfg.starts);
  for (int k = 0; k < cfg.starts; ++k) starts.push_back(fam.sample(rng));
  return starts;
}

}  // namespace detail

/// Evaluator of C on one domain, holding its dual representation.
class CaratheodoryMetric {
 public:
  explicit CaratheodoryMetric(Domain domain, OptimizerConfig cfg = {}, Convention convention = Convention::Half,
                              Tolerances tol = {})
      : domain_(std::move(domain)), cfg_(cfg), convention_(convention), tol_(tol) {
    cfg_.validate();
    tol_.validate();
    dual_ = dual_of(domain_, tol_, cfg_.seed);
  }

  CaratheodoryMetric(Domain domain, DualRepresentation dual, OptimizerConfig cfg = {},
                     Convention convention = Convention::Half, Tolerances tol = {})
      : domain_(std::move(domain)), dual_(std::move(dual)), cfg_(cfg), convention_(convention), tol_(tol) {
    cfg_.validate();
    tol_.validate();
  }

  const Domain& domain() const { return domain_; }
  const DualRepresentation& dual() const { return dual_; }
  const OptimizerConfig& config() const { return cfg_; }
  Convention convention() const { return convention_; }

  MetricValue operator()(const GrassmannPoint& x, const GrassmannPoint& y) const {
    if (!domain_.contains(x) || !domain_.contains(y)) fail(ErrorCode::OutsideDomain, "point outside the domain");
    const double factor = convention_factor(convention_);
    MetricValue out;
    out.convention = convention_;
    std::visit(
        [&](const auto& d) {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, ExplicitVertices> || std::is_same_v<T, SampleCloud>) {
            out.method = std::is_same_v<T, ExplicitVertices> ? MetricMethod::Exact : MetricMethod::Sampled;
            // phi(xi) = log|<x,xi>| - log|<y,xi>|; sup |log CR| = max phi - min phi
            std::size_t imax = 0, imin = 0;
            double pmax = -std::numeric_limits<double>::infinity(), pmin = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < d.points.size(); ++i) {
              const double phi = std::log(pairing(x, d.points[i])) - std::log(pairing(y, d.points[i]));
              if (phi > pmax) {
                pmax = phi;
                imax = i;
              }
              if (phi < pmin) {
                pmin = phi;
                imin = i;
              }
            }
            out.value = factor * (pmax - pmin);
            out.xi = d.points[imax];
            out.eta = d.points[imin];
          } else {
            out.method = MetricMethod::Optimized;
            optimize(d, x, y, out);
          }
        },
        dual_);
    return out;
  }

 private:
  template <class Family>
  void optimize(const Family& fam, const GrassmannPoint& x, const GrassmannPoint& y, MetricValue& out) const {
    const auto starts = detail::family_starts(fam, cfg_);
    const int m = static_cast<int>(starts.size());
    // phi and -phi are ascended from the same starts, so swapping x and y
    // swaps the two problems exactly.
    auto phi = [&](double sign) {
      return [&fam, &x, &y, sign](const Eigen::VectorXd& t, Eigen::VectorXd* g) {
        Eigen::VectorXd gx, gy;
        const double v = fam.log_pairing(x.rep(), t, g ? &gx : nullptr) - fam.log_pairing(y.rep(), t, g ? &gy : nullptr);
        if (g) *g = sign * (gx - gy);
        return sign * v;
      };
    };
    auto project = [&fam](const Eigen::VectorXd& t) { return fam.project(t); };
    std::vector<detail::AscentResult> up(m), down(m);
    detail::parallel_for(
        2 * m,
        [&](int i) {
          if (i < m)
            up[i] = detail::projected_ascent(phi(1.0), project, starts[i], cfg_);
          else
            down[i - m] = detail::projected_ascent(phi(-1.0), project, starts[i - m], cfg_);
        },
        cfg_.threads);
    auto best = [](const std::vector<detail::AscentResult>& r) {
      std::size_t b = 0;
      for (std::size_t i = 1; i < r.size(); ++i)
        if (r[i].value > r[b].value) b = i;
      return b;
    };
    const std::size_t bu = best(up), bd = best(down);
    std::vector<double> vu, vd;
    for (const auto& r : up) vu.push_back(r.value);
    for (const auto& r : down) vd.push_back(r.value);
    const double factor = convention_factor(convention_);
    out.value = factor * std::max(0.0, up[bu].value + down[bd].value);
    out.error_bound = factor * (detail::start_dispersion(vu) + detail::start_dispersion(vd));
    out.xi = fam.point(up[bu].theta);
    out.eta = fam.point(down[bd].theta);
  }

  Domain domain_;
  DualRepresentation dual_;
  OptimizerConfig cfg_;
  Convention convention_;
  Tolerances tol_;
};

inline MetricValue caratheodory_metric(const Domain& domain, const GrassmannPoint& x, const GrassmannPoint& y,
                                       const OptimizerConfig& cfg = {}, Convention convention = Convention::Half) {
  return CaratheodoryMetric(domain, cfg, convention)(x, y);
}

// ---------------------------------------------------------------------------
// Hilbert metric along lines

namespace detail {

inline Eigen::MatrixXd projective_coords(const Domain& domain, const GrassmannPoint& x) {
  if (!domain.is_projective()) fail(ErrorCode::InvalidDimension, "line metrics need a projective domain");
  if (!domain.contains(x)) fail(ErrorCode::OutsideDomain, "point outside the domain");
  return *domain.coordinates(x);
}

/// Hilbert distance between chart points u, v on the maximal open segment
/// through them that starts at u; +inf when that segment leaves the domain
/// before reaching v.
inline double segment_hilbert(const Domain& domain, const Eigen::MatrixXd& u, const Eigen::MatrixXd& v) {
  const Eigen::MatrixXd dir = v - u;
  if (dir.norm() == 0.0) return 0.0;
  const RayExit fwd = ray_exit(domain, u, dir);
  const RayExit bwd = ray_exit(domain, u, -dir);
  if (fwd.bounded && fwd.boundary <= 1.0) return std::numeric_limits<double>::infinity();
  // a = u - s_b dir, b = u + s_f dir; H = log((1 + s_b) s_f / (s_b (s_f - 1)))
  double h = 0.0;
  if (bwd.bounded) h += std::log1p(1.0 / bwd.boundary);
  if (fwd.bounded) h -= std::log1p(-1.0 / fwd.boundary);
  return h;
}

}  // namespace detail

/// log(|y-a||x-b| / (|x-a||y-b|)) with a, x, y, b in order along the chord.
inline double hilbert_metric_line(const Domain& domain, const GrassmannPoint& x, const GrassmannPoint& y) {
  const Eigen::MatrixXd u = detail::projective_coords(domain, x), v = detail::projective_coords(domain, y);
  if ((v - u).norm() == 0.0) return 0.0;
  if (domain.kind() == DomainKind::Oracle) {
    // the line must meet the domain in a single interval
    const auto& o = *domain.as<OracleDomain>();
    const Eigen::VectorXd dir = (v - u).col(0);
    for (double sign : {1.0, -1.0}) {
      const RayExit e = ray_exit(domain, u, sign * dir);
      if (!e.bounded) continue;
      const Eigen::VectorXd from = u.col(0) + sign * e.boundary * dir;
      double s_box = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < from.size(); ++i) {
        const double r = sign * dir(i);
        if (r > 0.0) s_box = std::min(s_box, (o.box_hi(i) - from(i)) / r);
        if (r < 0.0) s_box = std::min(s_box, (o.box_lo(i) - from(i)) / r);
      }
      for (int k = 1; k <= 1024; ++k)
        if (o.member(from + sign * (s_box * k / 1024) * dir))
          fail(ErrorCode::NotConvex, "line meets the domain in more than one interval");
    }
  }
  const double h = detail::segment_hilbert(domain, u, v);
  if (!std::isfinite(h)) fail(ErrorCode::NotConvex, "segment between the points leaves the domain");
  return h;
}

// ---------------------------------------------------------------------------
// Kobayashi-type metrics

namespace detail {

/// H_I of the images of x, y under the projective map T to the interval with
/// T(ker xi) = [1:-1] and T(ker eta) = [1:1].
inline double interval_distance(const Eigen::VectorXd& f, const Eigen::VectorXd& g, const Eigen::VectorXd& x,
                                const Eigen::VectorXd& y) {
  const double s1 = f.dot(x) < 0.0 ? -1.0 : 1.0;
  const double s2 = g.dot(x) < 0.0 ? -1.0 : 1.0;
  auto t_of = [&](const Eigen::VectorXd& v) {
    const double a = 0.5 * (s1 * f.dot(v) + s2 * g.dot(v));
    const double b = 0.5 * (s1 * f.dot(v) - s2 * g.dot(v));
    return b / a;
  };
  const double tx = t_of(x), ty = t_of(y);
  return std::abs(std::log((1.0 + ty) * (1.0 - tx) / ((1.0 + tx) * (1.0 - ty))));
}

template <class Family>
Eigen::VectorXd project_pair(const Family& fam, const Eigen::VectorXd& t, int k) {
  Eigen::VectorXd out(t.size());
  out << fam.project(t.head(k)), fam.project(t.tail(k));
  return out;
}

}  // namespace detail

/// c(x, y): sup over dual pairs of the interval distance between images under
/// the associated projective maps to the interval. Full convention.
inline MetricValue kobayashi_c(const Domain& domain, const DualRepresentation& dual, const GrassmannPoint& x,
                               const GrassmannPoint& y, const OptimizerConfig& cfg = {}) {
  cfg.validate();
  detail::projective_coords(domain, x);
  detail::projective_coords(domain, y);
  const Eigen::VectorXd xv = x.rep().col(0), yv = y.rep().col(0);
  MetricValue out;
  out.convention = Convention::Full;
  std::visit(
      [&](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, ExplicitVertices> || std::is_same_v<T, SampleCloud>) {
          out.method = std::is_same_v<T, ExplicitVertices> ? MetricMethod::Exact : MetricMethod::Sampled;
          std::vector<Eigen::VectorXd> funcs;
          for (const auto& p : d.points) funcs.push_back(pairing_functional(p));
          double best = 0.0;
          std::size_t bi = 0, bj = 0;
          for (std::size_t i = 0; i < funcs.size(); ++i)
            for (std::size_t j = 0; j < funcs.size(); ++j) {
              if (i == j) continue;
              const double v = detail::interval_distance(funcs[i], funcs[j], xv, yv);
              if (v > best) {
                best = v;
                bi = i;
                bj = j;
              }
            }
          out.value = best;
          if (!d.points.empty()) {
            out.xi = d.points[bi];
            out.eta = d.points[bj];
          }
        } else {
          out.method = MetricMethod::Optimized;
          const int k = d.param_dim();
          auto split = [k](const Eigen::VectorXd& t) { return std::pair{t.head(k).eval(), t.tail(k).eval()}; };
          auto objective = [&](const Eigen::VectorXd& t, Eigen::VectorXd* g) {
            auto value = [&](const Eigen::VectorXd& s) {
              auto [a, b] = split(s);
              return detail::interval_distance(pairing_functional(d.point(a)), pairing_functional(d.point(b)), xv, yv);
            };
            const double v = value(t);
            if (g) {
              g->resize(t.size());
              // central differences on the unprojected parametrization, which
              // extends smoothly past the boundary where the optimum sits
              for (Eigen::Index i = 0; i < t.size(); ++i) {
                const double h = 1e-7 * (1.0 + std::abs(t(i)));
                Eigen::VectorXd tp = t, tm = t;
                tp(i) += h;
                tm(i) -= h;
                (*g)(i) = (value(tp) - value(tm)) / (2 * h);
              }
            }
            return v;
          };
          auto project = [&](const Eigen::VectorXd& t) { return detail::project_pair(d, t, k); };
          std::mt19937_64 rng(cfg.seed);
          std::vector<Eigen::VectorXd> starts;
          for (int s = 0; s < cfg.starts; ++s) {
            Eigen::VectorXd t(2 * k);
            t << d.sample(rng), d.sample(rng);
            starts.push_back(t);
          }
          std::vector<detail::AscentResult> res(starts.size());
          detail::parallel_for(
              static_cast<int>(starts.size()),
              [&](int i) { res[i] = detail::projected_ascent(objective, project, starts[i], cfg); }, cfg.threads);
          std::size_t b = 0;
          std::vector<double> vals;
          for (std::size_t i = 0; i < res.size(); ++i) {
            vals.push_back(res[i].value);
            if (res[i].value > res[b].value) b = i;
          }
          out.value = res[b].value;
          out.error_bound = detail::start_dispersion(vals);
          auto [a, c] = split(res[b].theta);
          out.xi = d.point(a);
          out.eta = d.point(c);
        }
      },
      dual);
  return out;
}

inline MetricValue kobayashi_c(const Domain& domain, const GrassmannPoint& x, const GrassmannPoint& y,
                               const OptimizerConfig& cfg = {}) {
  return kobayashi_c(domain, dual_of(domain, {}, cfg.seed), x, y, cfg);
}

/// Upper bound on k(x, y): shortest chain x = z_0, ..., z_m = y through at
/// most `chain_depth` intermediate waypoints, with link lengths the Hilbert
/// distance of the maximal segment through consecutive points. Waypoints are
/// the basepoint followed by seeded interior samples.
inline double kobayashi_k(const Domain& domain, const GrassmannPoint& x, const GrassmannPoint& y, int chain_depth,
                          int waypoints, std::uint64_t seed = 0) {
  if (chain_depth < 0 || waypoints < 0) fail(ErrorCode::ValidationError, "chain_depth and waypoints must be >= 0");
  std::vector<Eigen::MatrixXd> nodes{detail::projective_coords(domain, x), detail::projective_coords(domain, y)};
  if ((nodes[0] - nodes[1]).norm() == 0.0) return 0.0;
  if (waypoints > 0) {
    nodes.push_back(domain.basepoint_coords());
    for (auto& s : domain_samples(domain, waypoints - 1, seed)) nodes.push_back(std::move(s));
  }
  const std::size_t m = nodes.size();
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> w(m * m, inf);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (i != j) w[i * m + j] = detail::segment_hilbert(domain, nodes[i], nodes[j]);
  std::vector<double> dist(m, inf);
  dist[0] = 0.0;
  for (int round = 0; round <= chain_depth; ++round) {
    std::vector<double> next = dist;
    for (std::size_t i = 0; i < m; ++i) {
      if (!std::isfinite(dist[i])) continue;
      for (std::size_t j = 0; j < m; ++j) next[j] = std::min(next[j], dist[i] + w[i * m + j]);
    }
    dist = std::move(next);
  }
  return dist[1];
}

// ---------------------------------------------------------------------------
// Completeness

enum class CompletenessKind { DivergesEverywhere, CauchyEscape, Inconclusive };

inline const char* to_string(CompletenessKind k) {
  switch (k) {
    case CompletenessKind::DivergesEverywhere: return "diverges_everywhere";
    case CompletenessKind::CauchyEscape: return "cauchy_escape";
    case CompletenessKind::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

/// C(x0, x_t) along x_t = x0 + t (b - x0), t_k = 1 - 2^-k.
struct CompletenessProfile {
  Eigen::MatrixXd target;
  std::vector<double> t;
  std::vector<double> value;
  double sup = 0.0;
  double oscillation = 0.0;  // largest |increment| over the tail
  bool monotone_tail = true;
  bool diverges = false;
};

struct CompletenessVerdict {
  CompletenessKind kind = CompletenessKind::Inconclusive;
  std::vector<CompletenessProfile> profiles;
  std::optional<std::size_t> witness;  // index of the escaping profile
};

struct CompletenessConfig {
  double threshold = 5.0;
  int profile_length = 40;
  int tail = 10;
  double oscillation_tol = 1e-3;
};

inline CompletenessProfile completeness_profile(const CaratheodoryMetric& metric, const Eigen::MatrixXd& target,
                                                const CompletenessConfig& cc = {}) {
  const Domain& domain = metric.domain();
  const Eigen::MatrixXd x0 = domain.basepoint_coords();
  const GrassmannPoint base = domain.point(x0);
  CompletenessProfile p;
  p.target = target;
  for (int k = 1; k <= cc.profile_length; ++k) {
    const double t = 1.0 - std::ldexp(1.0, -k);
    const Eigen::MatrixXd xt = x0 + t * (target - x0);
    if (!domain.contains_coords(xt)) break;
    p.t.push_back(t);
    p.value.push_back(metric(base, domain.point(xt)).value);
  }
  if (p.value.empty()) fail(ErrorCode::OutsideDomain, "probe ray leaves the domain immediately");
  p.sup = *std::max_element(p.value.begin(), p.value.end());
  const std::size_t n = p.value.size();
  const std::size_t from = n > static_cast<std::size_t>(cc.tail) ? n - cc.tail : 1;
  for (std::size_t i = std::max<std::size_t>(from, 1); i < n; ++i) {
    const double inc = p.value[i] - p.value[i - 1];
    p.oscillation = std::max(p.oscillation, std::abs(inc));
    if (inc < -1e-9 * (1.0 + std::abs(p.value[i]))) p.monotone_tail = false;
  }
  p.diverges = p.sup >= cc.threshold && p.monotone_tail;
  return p;
}

/// Probes C(x0, x_t) toward `probes` boundary points (plus explicit targets).
/// DivergesEverywhere when every profile crosses the threshold with a monotone
/// tail; CauchyEscape when some profile stays below it with vanishing
/// oscillation, the witness being the one with the smallest sup.
inline CompletenessVerdict completeness_probe(const CaratheodoryMetric& metric, int probes, std::uint64_t seed,
                                              const std::vector<Eigen::MatrixXd>& targets = {},
                                              const CompletenessConfig& cc = {}) {
  if (probes < 0) fail(ErrorCode::ValidationError, "probes must be >= 0");
  std::vector<Eigen::MatrixXd> all = targets;
  if (probes > 0)
    for (const auto& b : boundary_sample(metric.domain(), probes, seed)) all.push_back(b.coords);
  if (all.empty()) fail(ErrorCode::ValidationError, "no probe targets");
  CompletenessVerdict v;
  for (const auto& t : all) v.profiles.push_back(completeness_profile(metric, t, cc));
  bool all_diverge = true;
  for (std::size_t i = 0; i < v.profiles.size(); ++i) {
    const auto& p = v.profiles[i];
    all_diverge = all_diverge && p.diverges;
    if (p.sup < cc.threshold && p.oscillation < cc.oscillation_tol &&
        (!v.witness || p.sup < v.profiles[*v.witness].sup))
      v.witness = i;
  }
  if (v.witness)
    v.kind = CompletenessKind::CauchyEscape;
  else if (all_diverge)
    v.kind = CompletenessKind::DivergesEverywhere;
  return v;
}

inline CompletenessVerdict completeness_probe(const Domain& domain, const OptimizerConfig& cfg, int probes,
                                              std::uint64_t seed, const std::vector<Eigen::MatrixXd>& targets = {}) {
  return completeness_probe(CaratheodoryMetric(domain, cfg), probes, seed, targets);
}

// ---------------------------------------------------------------------------
// Invariance

struct InvarianceReport {
  double max_deviation = 0.0;
  std::vector<double> per_element;
  double max_error_bound = 0.0;
};

/// Fails with NotAnAutomorphism unless g and g^-1 map sampled points of the
/// domain into it.
inline void check_automorphism(const Domain& domain, const Eigen::MatrixXd& g, std::uint64_t seed = 0) {
  if (g.rows() != domain.ambient_dim() || g.cols() != domain.ambient_dim())
    fail(ErrorCode::DimensionMismatch, "group element has the wrong size");
  const auto lu = g.fullPivLu();
  if (!lu.isInvertible()) fail(ErrorCode::NotAnAutomorphism, "group element is singular");
  const Eigen::MatrixXd ginv = lu.inverse();
  for (const auto& s : domain_samples(domain, 64, seed)) {
    const GrassmannPoint x = domain.point(s);
    for (const Eigen::MatrixXd* h : {&g, &ginv}) {
      const GrassmannPoint hx = act(*h, x);
      if (!domain.contains(hx)) {
        std::ostringstream msg;
        msg << "sample " << s.transpose() << " is mapped outside the domain";
        fail(ErrorCode::NotAnAutomorphism, msg.str());
      }
    }
  }
}

/// max over sampled pairs and group elements of |C(gx, gy) - C(x, y)|.
inline InvarianceReport invariance_check(const CaratheodoryMetric& metric, const std::vector<Eigen::MatrixXd>& group,
                                         int pairs, std::uint64_t seed) {
  if (pairs < 1) fail(ErrorCode::ValidationError, "pairs must be >= 1");
  const Domain& domain = metric.domain();
  for (const auto& g : group) check_automorphism(domain, g, seed);
  const auto samples = domain_samples(domain, 2 * pairs, seed);
  InvarianceReport r;
  std::vector<MetricValue> base;
  for (int i = 0; i < pairs; ++i) base.push_back(metric(domain.point(samples[2 * i]), domain.point(samples[2 * i + 1])));
  for (const auto& g : group) {
    double dev = 0.0;
    for (int i = 0; i < pairs; ++i) {
      const GrassmannPoint gx = act(g, domain.point(samples[2 * i]));
      const GrassmannPoint gy = act(g, domain.point(samples[2 * i + 1]));
      const MetricValue moved = metric(gx, gy);
      dev = std::max(dev, std::abs(moved.value - base[i].value));
      r.max_error_bound = std::max({r.max_error_bound, moved.error_bound, base[i].error_bound});
    }
    r.per_element.push_back(dev);
    r.max_deviation = std::max(r.max_deviation, dev);
  }
  return r;
}

inline InvarianceReport invariance_check(const Domain& domain, const std::vector<Eigen::MatrixXd>& group, int pairs,
                                         const OptimizerConfig& cfg, std::uint64_t seed) {
  return invariance_check(CaratheodoryMetric(domain, cfg), group, pairs, seed);
}

}  // namespace flagmetric

#endif  // FLAGMETRIC_METRICS_HPP
