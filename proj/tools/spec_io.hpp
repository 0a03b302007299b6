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

#ifndef FLAGMETRIC_TOOLS_SPEC_IO_HPP
#define FLAGMETRIC_TOOLS_SPEC_IO_HPP

// Domain specification files:
//
//   {"variant": "polytope", "vertices": [[x, y], ...]}
//   {"variant": "ball", "center": [...], "radius": r, "shape": [[...], ...]}
//   {"variant": "matrix_ball", "p": 2, "q": 2}
//   {"variant": "pd_cone", "d": 3}
//   {"variant": "positive_orthant", "n": 3}
//   {"variant": "oracle_lshape"}
//
// with an optional "chart": {"frame": [[...]], "plane_dim": 1} or
// {"centred_on": [...]}. Matrices are row-major.

#include <Eigen/Dense>

#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include "flagmetric/domain.hpp"
#include "json.hpp"

namespace flagmetric::tools {

using nlohmann::json;

namespace detail {

[[noreturn]] inline void field_error(const std::string& field, const std::string& what) {
  fail(ErrorCode::ParseError, "field '" + field + "': " + what);
}

inline const json& require(const json& j, const std::string& field) {
  if (!j.contains(field)) field_error(field, "missing");
  return j.at(field);
}

inline double number(const json& j, const std::string& field) {
  if (!j.is_number()) field_error(field, "expected a number");
  return j.get<double>();
}

inline int integer(const json& j, const std::string& field) {
  if (!j.is_number_integer()) field_error(field, "expected an integer");
  return j.get<int>();
}

inline Eigen::VectorXd vector(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) field_error(field, "expected a non-empty array of numbers");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(i) = number(j[i], field + "[" + std::to_string(i) + "]");
  return v;
}

inline Eigen::MatrixXd matrix(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) field_error(field, "expected a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  Eigen::MatrixXd m;
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Eigen::VectorXd row = vector(j[r], field + "[" + std::to_string(r) + "]");
    if (r == 0) m.resize(rows, row.size());
    if (row.size() != m.cols()) field_error(field, "rows have different lengths");
    m.row(r) = row.transpose();
  }
  return m;
}

inline std::optional<ChartSpec> chart(const json& spec) {
  if (!spec.contains("chart")) return std::nullopt;
  const json& c = spec.at("chart");
  if (!c.is_object()) field_error("chart", "expected an object");
  if (c.contains("centred_on")) return ChartSpec::centred_on(vector(c.at("centred_on"), "chart.centred_on"));
  const Eigen::MatrixXd frame = matrix(require(c, "frame"), "chart.frame");
  const int p = c.contains("plane_dim") ? integer(c.at("plane_dim"), "chart.plane_dim") : 1;
  return ChartSpec::from_frame(frame, p);
}

}  // namespace detail

/// Builds a validated Domain from parsed JSON. Throws ParseError for malformed
/// fields and ValidationError for well-formed but invalid domains.
inline Domain domain_from_json(const json& spec) {
  using namespace detail;
  if (!spec.is_object()) field_error("<root>", "expected an object");
  const json& tag = require(spec, "variant");
  if (!tag.is_string()) field_error("variant", "expected a string");
  const std::string variant = tag.get<std::string>();
  const auto ch = chart(spec);
  if (variant == "polytope") {
    const json& vs = require(spec, "vertices");
    if (!vs.is_array()) field_error("vertices", "expected an array");
    std::vector<Eigen::VectorXd> vertices;
    for (std::size_t i = 0; i < vs.size(); ++i) {
      const std::string field = "vertices[" + std::to_string(i) + "]";
      vertices.push_back(vector(vs[i], field));
      if (vertices.back().size() != vertices.front().size()) field_error(field, "vertices have different lengths");
    }
    return Domain::polytope(std::move(vertices), ch);
  }
  if (variant == "ball") {
    const Eigen::VectorXd center = vector(require(spec, "center"), "center");
    const double radius = number(require(spec, "radius"), "radius");
    const Eigen::MatrixXd shape = spec.contains("shape") ? matrix(spec.at("shape"), "shape")
                                                         : Eigen::MatrixXd::Identity(center.size(), center.size());
    return Domain::ball(center, shape, radius, ch);
  }
  if (variant == "matrix_ball") {
    if (ch) field_error("chart", "matrix balls use their standard chart");
    return Domain::matrix_ball(integer(require(spec, "p"), "p"), integer(require(spec, "q"), "q"));
  }
  if (variant == "pd_cone") {
    if (ch) field_error("chart", "the PD cone uses its standard chart");
    return Domain::pd_cone(integer(require(spec, "d"), "d"));
  }
  if (variant == "positive_orthant") {
    if (ch) field_error("chart", "the orthant uses the chart centred on (1, ..., 1)");
    return Domain::positive_orthant(integer(require(spec, "n"), "n"));
  }
  if (variant == "oracle_lshape") {
    if (ch) field_error("chart", "the L-shape oracle uses the standard chart");
    return Domain::lshape();
  }
  field_error("variant", "unknown variant '" + variant + "'");
}

inline Domain parse_domain_spec_text(const std::string& text) {
  json spec;
  try {
    spec = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::ParseError, std::string("invalid JSON: ") + e.what());
  }
  return domain_from_json(spec);
}

inline Domain parse_domain_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::ParseError, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_domain_spec_text(buf.str());
}

}  // namespace flagmetric::tools

#endif  // FLAGMETRIC_TOOLS_SPEC_IO_HPP
