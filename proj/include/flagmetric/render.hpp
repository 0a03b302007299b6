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

#ifndef FLAGMETRIC_RENDER_HPP
#define FLAGMETRIC_RENDER_HPP

// Metric balls in 2-dimensional charts, and the CSV / SVG writers used by the
// command line tool.

#include <Eigen/Dense>

#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "flagmetric/domain.hpp"
#include "flagmetric/metrics.hpp"

namespace flagmetric {

/// Boundary of {y : C(center, y) < radius}: along `resolution` evenly spaced
/// rays, the parameter where C reaches the radius, found by bisection.
inline std::vector<Eigen::Vector2d> render_metric_ball(const CaratheodoryMetric& metric, const Eigen::Vector2d& center,
                                                       double radius, int resolution) {
  const Domain& domain = metric.domain();
  if (domain.coord_rows() * domain.coord_cols() != 2) fail(ErrorCode::InvalidDimension, "needs a 2-dimensional chart");
  if (resolution < 1) fail(ErrorCode::ValidationError, "resolution must be >= 1");
  if (!(radius >= 0.0)) fail(ErrorCode::ValidationError, "radius must be >= 0");
  const Eigen::MatrixXd c = center;
  if (!domain.contains_coords(c)) fail(ErrorCode::OutsideDomain, "center outside the domain");
  const GrassmannPoint cp = domain.point(c);
  std::vector<Eigen::Vector2d> out;
  for (int k = 0; k < resolution; ++k) {
    const double a = 2.0 * std::numbers::pi * k / resolution;
    const Eigen::MatrixXd dir = Eigen::Vector2d(std::cos(a), std::sin(a));
    if (radius == 0.0) {
      out.push_back(center);
      continue;
    }
    const RayExit e = ray_exit(domain, c, dir);
    const double reach = e.bounded ? e.inside : 1e6;
    auto dist = [&](double t) { return metric(cp, domain.point(c + t * dir)).value; };
    double lo = 0.0, hi = reach;
    for (int j = 1; j <= 52; ++j) {
      const double t = reach * (1.0 - std::ldexp(1.0, -j));
      if (dist(t) >= radius) {
        hi = t;
        break;
      }
      lo = t;
    }
    for (int it = 0; it < 60 && hi - lo > 1e-13 * (1.0 + hi); ++it) {
      const double mid = 0.5 * (lo + hi);
      (dist(mid) < radius ? lo : hi) = mid;
    }
    out.push_back(center + 0.5 * (lo + hi) * dir.col(0));
  }
  return out;
}

/// Header row, then rows with 17 significant digits.
inline void write_csv(std::ostream& os, const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows) {
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << '\n';
  std::ostringstream line;
  line << std::setprecision(17);
  for (const auto& r : rows) {
    line.str("");
    for (std::size_t i = 0; i < r.size(); ++i) line << (i ? "," : "") << r[i];
    os << line.str() << '\n';
  }
}

/// Axis-aligned box of the domain in its 2-dimensional chart, from boundary
/// samples, padded by 5%.
inline std::pair<Eigen::Vector2d, Eigen::Vector2d> chart_box(const Domain& domain) {
  if (const auto* o = domain.as<OracleDomain>()) return {o->box_lo, o->box_hi};
  Eigen::Vector2d lo = Eigen::Vector2d::Constant(std::numeric_limits<double>::infinity());
  Eigen::Vector2d hi = -lo;
  for (const auto& b : boundary_sample(domain, 256, 0)) {
    const Eigen::Vector2d u = Eigen::Map<const Eigen::Vector2d>(b.coords.data());
    lo = lo.cwiseMin(u);
    hi = hi.cwiseMax(u);
  }
  const Eigen::Vector2d pad = 0.05 * (hi - lo);
  return {lo - pad, hi + pad};
}

/// Closed polyline in a viewBox matching the chart box (y axis pointing up).
inline void write_svg(std::ostream& os, const std::vector<Eigen::Vector2d>& polyline, const Eigen::Vector2d& lo,
                      const Eigen::Vector2d& hi) {
  const Eigen::Vector2d size = hi - lo;
  os << std::setprecision(17);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << lo.x() << ' ' << -hi.y() << ' ' << size.x() << ' '
     << size.y() << "\">\n";
  os << "  <polyline fill=\"none\" stroke=\"black\" stroke-width=\"" << 0.005 * size.maxCoeff() << "\" points=\"";
  for (std::size_t i = 0; i <= polyline.size() && !polyline.empty(); ++i) {
    const auto& p = polyline[i % polyline.size()];
    os << (i ? " " : "") << p.x() << ',' << -p.y();
  }
  os << "\"/>\n</svg>\n";
}

}  // namespace flagmetric

#endif  // FLAGMETRIC_RENDER_HPP
