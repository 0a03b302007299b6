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

// flagmetric: command line front end. Exit status 0 on success, 1 on
// malformed input or arguments, 2 when a computation fails.

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "flagmetric/flagmetric.hpp"
#include "spec_io.hpp"

namespace fm = flagmetric;

namespace {

struct RunConfig {
  std::string input;
  std::uint64_t seed = 0;
  int starts = 64;
  std::string convention = "half";
  std::string out;
  std::string format = "csv";
};

fm::Convention convention_of(const RunConfig& rc) {
  return rc.convention == "full" ? fm::Convention::Full : fm::Convention::Half;
}

fm::OptimizerConfig optimizer_of(const RunConfig& rc) {
  fm::OptimizerConfig cfg;
  cfg.starts = rc.starts;
  cfg.seed = rc.seed;
  return cfg;
}

fm::Domain load(const RunConfig& rc) {
  if (rc.input.empty()) fm::fail(fm::ErrorCode::ValidationError, "--input is required");
  return fm::tools::parse_domain_spec(rc.input);
}

std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      fm::fail(fm::ErrorCode::ValidationError, what + ": cannot parse '" + item + "' as a number");
    }
  }
  if (out.empty()) fm::fail(fm::ErrorCode::ValidationError, what + ": empty list");
  return out;
}

/// Point from a comma-separated list: chart coordinates (row-major for
/// matrices), or the d*d entries of a symmetric matrix for the PD cone.
fm::GrassmannPoint point_of(const fm::Domain& domain, const std::string& text, const std::string& what) {
  const auto v = parse_list(text, what);
  if (const auto* pd = domain.as<fm::PDConeDomain>();
      pd && static_cast<int>(v.size()) == pd->d * pd->d && pd->d * pd->d != domain.coord_rows()) {
    Eigen::MatrixXd s = Eigen::Map<const Eigen::MatrixXd>(v.data(), pd->d, pd->d).transpose();
    if ((s - s.transpose()).norm() > 1e-12 * s.norm()) fm::fail(fm::ErrorCode::ValidationError, what + ": not symmetric");
    if (!fm::is_positive_definite(s)) fm::fail(fm::ErrorCode::OutsideDomain, what + ": not positive definite");
    return domain.pd_point(s);
  }
  const int rows = domain.coord_rows(), cols = domain.coord_cols();
  if (static_cast<int>(v.size()) != rows * cols)
    fm::fail(fm::ErrorCode::ValidationError,
             what + ": expected " + std::to_string(rows * cols) + " chart coordinates, got " + std::to_string(v.size()));
  Eigen::MatrixXd m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = v[r * cols + c];
  if (!domain.contains_coords(m)) fm::fail(fm::ErrorCode::OutsideDomain, what + " lies outside the domain");
  return domain.point(m);
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) fm::fail(fm::ErrorCode::ValidationError, "cannot write '" + path + "'");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

// ---------------------------------------------------------------------------

int cmd_dual(const RunConfig& rc) {
  const fm::Domain domain = load(rc);
  const fm::Certificate proper = fm::properness_certificate(domain);
  std::cerr << "domain: " << domain.name() << "\nproper: " << (proper.valid ? "yes" : "no")
            << "\nradius: " << fmt(proper.radius) << "\nmargin: " << fmt(proper.margin) << '\n';
  const fm::DualRepresentation dual = fm::dual_of(domain, {}, rc.seed);
  std::cerr << "representation: " << fm::to_string(fm::dual_kind(dual)) << '\n';
  Output out(rc.out);
  std::vector<std::vector<double>> rows;
  std::vector<std::string> header{"index", "margin"};
  const int n = domain.ambient_dim();
  const long dim = fm::binomial(n, domain.plane_dim());
  for (long i = 0; i < dim; ++i) header.push_back("f" + std::to_string(i));
  auto emit = [&](const std::vector<fm::DualGrassmannPoint>& pts, const std::vector<double>* margins) {
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const Eigen::VectorXd f = fm::pairing_functional(pts[i]);
      const double margin = margins ? (*margins)[i] : fm::dual_membership_certificate(pts[i], domain).margin;
      std::vector<double> row{double(i), margin};
      for (Eigen::Index k = 0; k < f.size(); ++k) row.push_back(f(k));
      rows.push_back(std::move(row));
    }
  };
  if (const auto* ev = std::get_if<fm::ExplicitVertices>(&dual)) {
    emit(ev->points, nullptr);
  } else if (const auto* sc = std::get_if<fm::SampleCloud>(&dual)) {
    emit(sc->points, &sc->margins);
  } else {
    // parametric families: report a spanning set drawn from the family
    emit(fm::spanning_basis(dual, n, domain.plane_dim(), {}, rc.seed), nullptr);
  }
  fm::write_csv(out.stream(), header, rows);
  return 0;
}

int cmd_metric(const RunConfig& rc, const std::string& xs, const std::string& ys, int depth, int waypoints) {
  const fm::Domain domain = load(rc);
  const fm::GrassmannPoint x = point_of(domain, xs, "x"), y = point_of(domain, ys, "y");
  const fm::CaratheodoryMetric metric(domain, optimizer_of(rc), convention_of(rc));
  const fm::MetricValue c = metric(x, y);
  Output out(rc.out);
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"C", fmt(c.value), fm::to_string(c.convention), fm::to_string(c.method), fmt(c.error_bound)});
  if (domain.is_projective()) {
    if (domain.kind() == fm::DomainKind::Polytope || domain.kind() == fm::DomainKind::Ball ||
        domain.kind() == fm::DomainKind::PDCone) {
      rows.push_back({"hilbert", fmt(fm::hilbert_metric_line(domain, x, y)), "full", "exact", "0"});
    }
    const fm::MetricValue kc = fm::kobayashi_c(domain, metric.dual(), x, y, optimizer_of(rc));
    rows.push_back({"kobayashi_c", fmt(kc.value), "full", fm::to_string(kc.method), fmt(kc.error_bound)});
    const double k = fm::kobayashi_k(domain, x, y, depth, waypoints, rc.seed);
    rows.push_back({"kobayashi_k_upper", fmt(k), "full", "chain", "0"});
  }
  auto& os = out.stream();
  os << "quantity,value,convention,method,error_bound\n";
  for (const auto& r : rows) os << r[0] << ',' << r[1] << ',' << r[2] << ',' << r[3] << ',' << r[4] << '\n';
  return 0;
}

int cmd_certify(const RunConfig& rc, int samples) {
  const fm::Domain domain = load(rc);
  std::optional<fm::OracleSampleSet> cache;
  if (domain.kind() == fm::DomainKind::Oracle) cache = fm::oracle_sample_set(domain);
  Output out(rc.out);
  std::vector<std::string> header;
  for (int i = 0; i < domain.coord_rows() * domain.coord_cols(); ++i) header.push_back("x" + std::to_string(i));
  header.insert(header.end(), {"certified", "touch_pairing", "margin"});
  std::vector<std::vector<double>> rows;
  int failures = 0;
  for (const auto& b : fm::boundary_sample(domain, samples, rc.seed)) {
    std::vector<double> row(b.coords.data(), b.coords.data() + b.coords.size());
    try {
      const fm::Certificate c = fm::dual_convexity_certificate(domain, b.coords, {}, cache ? &*cache : nullptr);
      row.insert(row.end(), {1.0, fm::pairing(b.point, *c.dual), c.margin});
    } catch (const fm::Error& e) {
      if (e.code() != fm::ErrorCode::NotDualConvexAt) throw;
      ++failures;
      row.insert(row.end(), {0.0, std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()});
    }
    rows.push_back(std::move(row));
  }
  fm::write_csv(out.stream(), header, rows);
  std::cerr << "certified " << rows.size() - failures << " of " << rows.size() << " boundary samples\n";
  if (failures > 0) {
    std::cerr << "error: NotDualConvexAt at " << failures << " boundary samples\n";
    return 2;
  }
  return 0;
}

std::vector<Eigen::MatrixXd> group_for(const fm::Domain& domain, int count, double scale, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::vector<Eigen::MatrixXd> out;
  const int n = domain.ambient_dim();
  for (int k = 0; k < count; ++k) {
    if (const auto* b = domain.as<fm::BallDomain>()) {
      // boosts of the Lorentz form preserving the unit ball
      if (b->center.norm() != 0.0 || (b->shape - Eigen::MatrixXd::Identity(n - 1, n - 1)).norm() != 0.0 ||
          b->radius != 1.0)
        fm::fail(fm::ErrorCode::ValidationError, "boosts need the unit ball in the standard chart");
      const Eigen::MatrixXd rot = fm::random_orthogonal(n - 1, rng);
      Eigen::MatrixXd r = Eigen::MatrixXd::Identity(n, n);
      r.bottomRightCorner(n - 1, n - 1) = rot;
      // J = diag(1, -1, ..., -1): one "space" axis against n - 1 "time" axes
      const Eigen::MatrixXd g = fm::boost(1, n - 1, 0, 0, scale * unif(rng)).g;
      out.push_back(r * g * r.transpose());
    } else if (const auto* mb = domain.as<fm::MatrixBallDomain>()) {
      out.push_back(fm::sample_automorphism(mb->p, mb->q, scale, rng()).g);
    } else if (const auto* pd = domain.as<fm::PDConeDomain>()) {
      Eigen::MatrixXd a = fm::detail::random_direction(pd->d, pd->d, rng) * scale;
      out.push_back(fm::congruence_matrix(fm::PDConeElement::normalized(a.exp()).g));
    } else {
      // diagonal maps; automorphisms of orthant-type polytopes, rejected elsewhere
      Eigen::VectorXd d(n);
      for (auto& e : d) e = std::exp(scale * unif(rng));
      out.push_back(d.asDiagonal());
    }
  }
  return out;
}

int cmd_invariance(const RunConfig& rc, int elements, int pairs, double scale) {
  const fm::Domain domain = load(rc);
  const fm::CaratheodoryMetric metric(domain, optimizer_of(rc), convention_of(rc));
  const auto group = group_for(domain, elements, scale, rc.seed);
  const fm::InvarianceReport r = fm::invariance_check(metric, group, pairs, rc.seed);
  Output out(rc.out);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < r.per_element.size(); ++i) rows.push_back({double(i), r.per_element[i]});
  fm::write_csv(out.stream(), {"element", "max_deviation"}, rows);
  std::cerr << "max deviation: " << fmt(r.max_deviation) << "\nmax optimizer error bound: " << fmt(r.max_error_bound)
            << '\n';
  return 0;
}

int cmd_complete(const RunConfig& rc, int probes, const std::vector<std::string>& targets) {
  const fm::Domain domain = load(rc);
  const fm::CaratheodoryMetric metric(domain, optimizer_of(rc), convention_of(rc));
  std::vector<Eigen::MatrixXd> explicit_targets;
  for (const auto& t : targets) {
    const auto v = parse_list(t, "target");
    if (static_cast<int>(v.size()) != domain.coord_rows() * domain.coord_cols())
      fm::fail(fm::ErrorCode::ValidationError, "target has the wrong number of coordinates");
    Eigen::MatrixXd m(domain.coord_rows(), domain.coord_cols());
    for (int r = 0; r < m.rows(); ++r)
      for (int c = 0; c < m.cols(); ++c) m(r, c) = v[r * m.cols() + c];
    explicit_targets.push_back(m);
  }
  const fm::CompletenessVerdict v = fm::completeness_probe(metric, probes, rc.seed, explicit_targets);
  Output out(rc.out);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < v.profiles.size(); ++i)
    for (std::size_t k = 0; k < v.profiles[i].t.size(); ++k)
      rows.push_back({double(i), v.profiles[i].t[k], v.profiles[i].value[k]});
  fm::write_csv(out.stream(), {"probe", "t", "C"}, rows);
  std::cerr << "verdict: " << fm::to_string(v.kind) << '\n';
  for (std::size_t i = 0; i < v.profiles.size(); ++i) {
    const auto& p = v.profiles[i];
    std::cerr << "probe " << i << ": target (" << p.target.transpose() << ") sup " << fmt(p.sup) << " oscillation "
              << fmt(p.oscillation) << (v.witness && *v.witness == i ? "  <- escape witness" : "") << '\n';
  }
  return 0;
}

int cmd_fiber_escape(const RunConfig& rc, int n, const std::string& dims_text, const std::string& radii_text,
                     int steps) {
  std::vector<int> dims;
  for (double d : parse_list(dims_text, "dims")) dims.push_back(static_cast<int>(d));
  std::vector<double> radii = radii_text.empty() ? std::vector<double>(dims.size(), 0.5) : parse_list(radii_text, "radii");
  const fm::FlagDomainSpec spec = fm::FlagDomainSpec::standard(n, dims, radii);
  const fm::FullFlag f0 = fm::FullFlag::from_basis(Eigen::MatrixXd::Identity(n, n), dims);
  const fm::EscapeWitness w = fm::fiber_escape_witness(n, dims, dims.front(), fm::flag_project(f0, dims.front()),
                                                       spec.reference);
  std::cerr << "witness fails opposition at level " << w.violated_dim << " with pairing " << fmt(w.pairing) << '\n';
  for (std::size_t i = 0; i < w.flag.subspaces().size(); ++i)
    std::cerr << "  level " << w.flag.dims()[i] << ":\n" << w.flag.subspaces()[i].rep() << '\n';
  const fm::FiberDemo demo = fm::fiber_boundary_demo(spec, f0, steps);
  std::cerr << "exit parameter: " << fmt(demo.exit_parameter) << '\n';
  Output out(rc.out);
  std::vector<std::vector<double>> rows;
  for (std::size_t k = 0; k < demo.flags.size(); ++k)
    rows.push_back({double(k), demo.parameter[k], demo.margin[k], demo.distance_to_limit[k], demo.projection_drift[k]});
  fm::write_csv(out.stream(), {"step", "s", "margin", "distance_to_limit", "projection_drift"}, rows);
  return 0;
}

int cmd_ball_plot(const RunConfig& rc, const std::string& center_text, double radius, int resolution) {
  const fm::Domain domain = load(rc);
  const auto c = parse_list(center_text, "center");
  if (c.size() != 2) fm::fail(fm::ErrorCode::ValidationError, "center needs two chart coordinates");
  const fm::CaratheodoryMetric metric(domain, optimizer_of(rc), convention_of(rc));
  const auto poly = fm::render_metric_ball(metric, Eigen::Vector2d(c[0], c[1]), radius, resolution);
  Output out(rc.out);
  if (rc.format == "svg") {
    const auto [lo, hi] = fm::chart_box(domain);
    fm::write_svg(out.stream(), poly, lo, hi);
  } else {
    std::vector<std::vector<double>> rows;
    for (const auto& p : poly) rows.push_back({p.x(), p.y()});
    if (!poly.empty()) rows.push_back({poly.front().x(), poly.front().y()});
    fm::write_csv(out.stream(), {"x", "y"}, rows);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"flagmetric: invariant metrics and dual domains on projective spaces and Grassmannians"};
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand
  RunConfig rc;
  app.add_option("--input", rc.input, "domain specification (JSON)");
  app.add_option("--seed", rc.seed, "random seed")->capture_default_str();
  app.add_option("--starts", rc.starts, "optimizer starts")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--convention", rc.convention, "factor in front of the log")
      ->check(CLI::IsMember({"half", "full"}))
      ->capture_default_str();
  app.add_option("--out", rc.out, "output path (default stdout)");
  app.add_option("--format", rc.format, "output format")->check(CLI::IsMember({"csv", "svg"}))->capture_default_str();

  std::function<int()> run;

  auto* dual = app.add_subcommand("dual", "dual representation and properness certificate");
  dual->callback([&] { run = [&] { return cmd_dual(rc); }; });

  std::string xs, ys;
  int depth = 1, waypoints = 16;
  auto* metric = app.add_subcommand("metric", "C, Hilbert, c and k between two points");
  metric->add_option("x", xs, "first point, comma-separated chart coordinates")->required();
  metric->add_option("y", ys, "second point")->required();
  metric->add_option("--depth", depth, "chain depth for k")->capture_default_str();
  metric->add_option("--waypoints", waypoints, "waypoints for k")->capture_default_str();
  metric->callback([&] { run = [&] { return cmd_metric(rc, xs, ys, depth, waypoints); }; });

  int samples = 360;
  auto* certify = app.add_subcommand("certify", "dual convexity sweep over boundary samples");
  certify->add_option("--samples", samples, "boundary samples")->capture_default_str()->check(CLI::PositiveNumber);
  certify->callback([&] { run = [&] { return cmd_certify(rc, samples); }; });

  int elements = 10, pairs = 10;
  double scale = 1.0;
  auto* inv = app.add_subcommand("invariance", "deviation of C under sampled automorphisms");
  inv->add_option("--elements", elements, "group elements")->capture_default_str()->check(CLI::PositiveNumber);
  inv->add_option("--pairs", pairs, "point pairs")->capture_default_str()->check(CLI::PositiveNumber);
  inv->add_option("--scale", scale, "size of sampled elements")->capture_default_str();
  inv->callback([&] { run = [&] { return cmd_invariance(rc, elements, pairs, scale); }; });

  int probes = 16;
  std::vector<std::string> targets;
  auto* complete = app.add_subcommand("complete", "divergence profiles toward the boundary and a verdict");
  complete->add_option("--probes", probes, "boundary probes")->capture_default_str();
  complete->add_option("--target", targets, "explicit boundary target, comma-separated (repeatable)");
  complete->callback([&] { run = [&] { return cmd_complete(rc, probes, targets); }; });

  int n = 3, steps = 20;
  std::string dims_text = "1,2", radii_text;
  auto* fiber = app.add_subcommand("fiber-escape", "fiber escape witness and boundary sequence");
  fiber->add_option("--n", n, "ambient dimension")->capture_default_str();
  fiber->add_option("--dims", dims_text, "flag dims, comma-separated")->capture_default_str();
  fiber->add_option("--radii", radii_text, "chart radius per level (default 0.5)");
  fiber->add_option("--steps", steps, "sequence length")->capture_default_str();
  fiber->callback([&] { run = [&] { return cmd_fiber_escape(rc, n, dims_text, radii_text, steps); }; });

  std::string center = "0,0";
  double radius = 0.5;
  int resolution = 64;
  auto* ball = app.add_subcommand("ball-plot", "boundary of a metric ball in a 2-dimensional chart");
  ball->add_option("--center", center, "center, comma-separated")->capture_default_str();
  ball->add_option("--radius", radius, "radius in C units")->capture_default_str();
  ball->add_option("--resolution", resolution, "number of rays")->capture_default_str();
  ball->callback([&] { run = [&] { return cmd_ball_plot(rc, center, radius, resolution); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  try {
    return run ? run() : 1;
  } catch (const fm::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.is_validation() ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
