#include "scenario.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace swarmstab {

using nlohmann::json;

const char* to_string(Expectation e) {
  switch (e) {
    case Expectation::Consensus: return "consensus";
    case Expectation::SwarmStable: return "swarm_stable";
    case Expectation::SwarmUnstable: return "swarm_unstable";
  }
  return "?";
}

ScenarioError::ScenarioError(std::vector<std::string> errors)
    : std::runtime_error(errors.empty() ? "scenario: invalid"
                                        : "scenario: " + errors.front() +
                                              (errors.size() > 1 ? " (+ more)" : "")),
      errors_(std::move(errors)) {}

namespace {

std::optional<Mat> read_matrix(const json& j, const std::string& key,
                               std::vector<std::string>& errors) {
  if (!j.contains(key)) {
    errors.push_back("missing field '" + key + "'");
    return std::nullopt;
  }
  const json& v = j.at(key);
  if (!v.is_array() || v.empty() || !v.front().is_array()) {
    errors.push_back("'" + key + "' must be a non-empty array of arrays");
    return std::nullopt;
  }
  const std::size_t rows = v.size();
  const std::size_t cols = v.front().size();
  Mat m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    if (!v[i].is_array() || v[i].size() != cols) {
      errors.push_back("'" + key + "' row " + std::to_string(i + 1) + " has wrong length");
      return std::nullopt;
    }
    for (std::size_t k = 0; k < cols; ++k) {
      if (!v[i][k].is_number()) {
        errors.push_back("'" + key + "' entry (" + std::to_string(i + 1) + "," +
                         std::to_string(k + 1) + ") is not a number");
        return std::nullopt;
      }
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = v[i][k].get<double>();
    }
  }
  if (!is_finite(m)) {
    errors.push_back("'" + key + "' contains non-finite values");
    return std::nullopt;
  }
  return m;
}

json matrix_to_json(const Mat& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

json complex_to_json(Complex z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

json spectrum_to_json(const Spectrum& s) {
  json a = json::array();
  for (const Complex& v : s.values) a.push_back(complex_to_json(v));
  return a;
}

json verdict_to_json(const StabilityVerdict& v) {
  json t = json::array();
  for (const ProductEntry& e : v.products.entries) {
    t.push_back(json{{"laplacian_index", e.laplacian_index + 1},
                     {"finite_index", e.finite_index + 1},
                     {"lambda", complex_to_json(e.lambda)},
                     {"mu", complex_to_json(e.mu)},
                     {"product", complex_to_json(e.product)}});
  }
  json out{{"classification", to_string(v.classification)},
           {"reasons", v.reasons},
           {"product_table", std::move(t)}};
  if (v.corollary) out["corollary"] = *v.corollary;
  return out;
}

} // namespace

Scenario parse_scenario_json(const json& j) {
  std::vector<std::string> errors;
  Scenario s;
  s.name = j.value("name", "unnamed");
  s.comment = j.value("comment", "");

  auto e = read_matrix(j, "E", errors);
  auto f = read_matrix(j, "F", errors);
  auto w = read_matrix(j, "W", errors);
  auto x0 = read_matrix(j, "X0", errors);

  if (e && (e->rows() != e->cols())) errors.push_back("E must be square");
  if (f && (f->rows() != f->cols())) errors.push_back("F must be square");
  if (e && f && e->rows() != f->rows()) errors.push_back("E and F must have equal order");
  if (w) {
    if (w->rows() != w->cols()) errors.push_back("W must be square");
    for (Eigen::Index i = 0; w && i < w->rows(); ++i) {
      if (i < w->cols() && (*w)(i, i) != 0.0)
        errors.push_back("W diagonal entry w(" + std::to_string(i + 1) + "," +
                         std::to_string(i + 1) + ") must be 0");
      for (Eigen::Index k = 0; k < w->cols(); ++k)
        if ((*w)(i, k) < 0.0)
          errors.push_back("W entry w(" + std::to_string(i + 1) + "," +
                           std::to_string(k + 1) + ") is negative");
    }
  }
  if (e && w && x0) {
    if (x0->rows() != e->rows() || x0->cols() != w->rows()) {
      std::ostringstream os;
      os << "X0 must be n x m = " << e->rows() << "x" << w->rows() << ", got "
         << x0->rows() << "x" << x0->cols();
      errors.push_back(os.str());
    }
  }

  if (j.contains("t_span")) {
    const json& ts = j.at("t_span");
    if (!ts.is_array() || ts.size() != 2 || !ts[0].is_number() || !ts[1].is_number()) {
      errors.push_back("'t_span' must be [t_start, t_end]");
    } else {
      if (ts[0].get<double>() != 0.0) errors.push_back("'t_span' must start at 0");
      s.t_end = ts[1].get<double>();
    }
  } else if (j.contains("t_end")) {
    s.t_end = j.at("t_end").get<double>();
  } else {
    errors.push_back("missing field 't_span'");
  }
  if (s.t_end <= 0.0) errors.push_back("t_end must be > 0");

  s.samples = j.value("samples", 400);
  if (s.samples < 2) errors.push_back("samples must be >= 2");

  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    if (t.contains("rank")) s.tolerances.rank = t.at("rank").get<double>();
    if (t.contains("eig")) s.tolerances.eig = t.at("eig").get<double>();
  }
  if (j.contains("expect")) {
    std::string ex = j.at("expect").get<std::string>();
    if (ex == "consensus") s.expect = Expectation::Consensus;
    else if (ex == "swarm_stable") s.expect = Expectation::SwarmStable;
    else if (ex == "swarm_unstable") s.expect = Expectation::SwarmUnstable;
    else errors.push_back("unknown 'expect' value '" + ex + "'");
  }

  if (!errors.empty()) throw ScenarioError(std::move(errors));
  s.e = std::move(*e);
  s.f = std::move(*f);
  s.w = std::move(*w);
  s.x0 = std::move(*x0);
  return s;
}

Scenario parse_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError({"cannot open '" + path + "'"});
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ScenarioError({std::string("JSON parse error: ") + e.what()});
  }
  return parse_scenario_json(j);
}

json scenario_to_json(const Scenario& s) {
  json j{{"name", s.name},
         {"E", matrix_to_json(s.e)},
         {"F", matrix_to_json(s.f)},
         {"W", matrix_to_json(s.w)},
         {"X0", matrix_to_json(s.x0)},
         {"t_span", json::array({0.0, s.t_end})},
         {"samples", s.samples}};
  if (!s.comment.empty()) j["comment"] = s.comment;
  if (s.expect) j["expect"] = to_string(*s.expect);
  json t = json::object();
  if (s.tolerances.rank) t["rank"] = *s.tolerances.rank;
  if (s.tolerances.eig) t["eig"] = *s.tolerances.eig;
  if (!t.empty()) j["tolerances"] = std::move(t);
  return j;
}

Scenario paper_instance(int which) {
  Scenario s;
  s.e = Mat{{2, 2, 0}, {-1, -2, 1}, {1, 3, -2}};
  const Mat w_a{{0, 0, 1, 0, 0},
                {1, 0, 0, 0, 0},
                {1, 1, 0, 0, 1},
                {1, 1, 1, 0, 0},
                {1, 0, 0, 0, 0}};
  const Mat w_b{{0, 2, 0, 2, 1},
                {2, 0, 0, 0, 0},
                {2, 2, 0, 0, 1},
                {0, 2, 1, 0, 1},
                {0, 0, 0, 1, 0}};
  switch (which) {
    case 1:
      s.name = "instance-1";
      s.comment = "Topology resolved to the heavier weighted graph: trace(L) "
                  "must equal the eigenvalue sum 17, which matches these row "
                  "sums and not the unit-weight graph (trace 9).";
      s.f = Mat{{2, 2, 2}, {0, 0, 1}, {0, 1, 2}};
      s.w = w_b;
      s.x0 = Mat{{-3.2776, -5.9099, 1.8076, 1.5806, -2.9512},
                 {-0.4794, 3.6798, -1.8174, -3.8132, 0.9020},
                 {-0.4735, -1.6135, -0.9556, -0.1104, -1.0944}};
      s.t_end = 12.0;
      s.expect = Expectation::Consensus;
      break;
    case 2:
      s.name = "instance-2";
      s.f = Mat{{1, 2, 0}, {1.125, 1, 0}, {0, 0, 10}};
      s.w = w_a;
      s.x0 = Mat{{-5.9138, -1.1723, -2.0973, -0.9124, -1.7271},
                 {2.5077, 0.7047, 1.7981, -0.0531, 3.9337},
                 {3.2370, 2.4445, 2.3951, 2.6190, 1.6665}};
      s.t_end = 6.0;
      s.expect = Expectation::SwarmUnstable;
      break;
    case 3: {
      s.name = "instance-3";
      s.f = Mat{{1, 2, 0}, {1.125, 1, 0}, {0, 0, 10}};
      Mat w = w_a;
      w(3, 2) = 2.0; // the single weight change that makes L diagonalizable
      s.w = w;
      s.x0 = Mat{{4.8626, 8.1001, -0.3978, -3.2563, 1.7169},
                 {2.6541, -7.5692, -4.3644, 1.9946, -0.7866},
                 {-1.6885, 0.4988, 1.8697, 0.7470, 0.2093}};
      s.t_end = 8.0;
      s.expect = Expectation::SwarmStable;
      break;
    }
    default:
      throw DomainError("paper_instance: instance must be 1, 2 or 3");
  }
  return s;
}

Report analyze_scenario(const Scenario& s) {
  Report r;
  r.scenario = s;
  WeightedDigraph g = WeightedDigraph::from_adjacency(s.w);
  MatrixPencil pc = MatrixPencil::make(s.e, s.f);
  r.analysis = SystemAnalysis::analyze(g, pc);
  r.consensus = check_consensus(r.analysis);
  r.swarm = check_swarm_stability(r.analysis);
  r.corollary = corollary_fast_paths(r.analysis, g);
  if (r.consensus.classification == Classification::AsymptoticallySwarmStable &&
      r.analysis.lap.left_zero_vector) {
    r.consensus_estimate = Vec(s.x0 * (*r.analysis.lap.left_zero_vector));
  }
  if (r.analysis.regular && r.analysis.decomp && r.analysis.decomp->ill_conditioned)
    r.warnings.push_back("standard decomposition is ill-conditioned");
  const double tol = strict_tolerance(r.analysis);
  for (const ProductEntry& e : r.consensus.products.entries)
    if (std::abs(e.product.real()) <= tol && std::abs(e.product.real()) > 0.0)
      r.warnings.push_back("a product real part sits inside the tolerance band");
  return r;
}

json report_to_json(const Report& r) {
  json j;
  j["scenario"] = scenario_to_json(r.scenario);
  j["graph"] = json{{"laplacian", matrix_to_json(r.analysis.lap.laplacian)},
                    {"spectrum", spectrum_to_json(r.analysis.lap.spectrum)},
                    {"zero_multiplicity", r.analysis.lap.zero_multiplicity},
                    {"has_spanning_tree", r.analysis.lap.has_spanning_tree},
                    {"diagonalizable", r.analysis.lap.diagonalizable}};
  json pj{{"regular", r.analysis.regular},
          {"rank_e", r.analysis.pencil.rank_e()}};
  if (r.analysis.regular) {
    pj["finite_eigenvalues"] = spectrum_to_json(r.analysis.finite);
    pj["impulse_free"] = r.analysis.impulse_free;
    pj["n1"] = r.analysis.decomp->n1;
    pj["n2"] = r.analysis.decomp->n2;
    pj["h"] = r.analysis.decomp->h;
  }
  j["pencil"] = std::move(pj);
  j["proposition1"] = verdict_to_json(r.consensus);
  j["proposition2"] = verdict_to_json(r.swarm);
  if (r.corollary) j["corollary_path"] = verdict_to_json(*r.corollary);
  if (r.consensus_estimate) {
    json c = json::array();
    for (Eigen::Index k = 0; k < r.consensus_estimate->size(); ++k)
      c.push_back((*r.consensus_estimate)(k));
    j["consensus_estimate"] = std::move(c);
  }
  j["warnings"] = r.warnings;
  return j;
}

namespace {

std::string fmt_c(Complex z) {
  std::ostringstream os;
  os << std::setprecision(5) << z.real();
  if (std::abs(z.imag()) > 0.0) os << std::showpos << z.imag() << "i" << std::noshowpos;
  return os.str();
}

} // namespace

std::string report_to_text(const Report& r) {
  std::ostringstream os;
  os << "scenario: " << r.scenario.name << " (n=" << r.scenario.n()
     << ", m=" << r.scenario.m() << ")\n";
  os << "laplacian spectrum:";
  for (const Complex& v : r.analysis.lap.spectrum.values) os << " " << fmt_c(v);
  os << "\nspanning tree: " << (r.analysis.lap.has_spanning_tree ? "yes" : "no")
     << ", diagonalizable: " << (r.analysis.lap.diagonalizable ? "yes" : "no") << "\n";
  os << "pencil: " << (r.analysis.regular ? "regular" : "NOT regular")
     << ", rank(E)=" << r.analysis.pencil.rank_e();
  if (r.analysis.regular) {
    os << ", impulse-free: " << (r.analysis.impulse_free ? "yes" : "no")
       << ", n1=" << r.analysis.decomp->n1 << ", n2=" << r.analysis.decomp->n2
       << ", h=" << r.analysis.decomp->h << "\nfinite eigenvalues:";
    for (const Complex& v : r.analysis.finite.values) os << " " << fmt_c(v);
  }
  os << "\nProp 1 (consensus): " << to_string(r.consensus.classification) << "\n";
  os << "Prop 2 (swarm stability): " << to_string(r.swarm.classification) << "\n";
  if (r.corollary && r.corollary->corollary)
    os << "fast path: " << *r.corollary->corollary << " -> "
       << to_string(r.corollary->classification) << "\n";
  if (r.consensus_estimate) {
    os << "predicted consensus value:";
    for (Eigen::Index k = 0; k < r.consensus_estimate->size(); ++k)
      os << " " << std::setprecision(5) << (*r.consensus_estimate)(k);
    os << "\n";
  }
  for (const std::string& w : r.warnings) os << "warning: " << w << "\n";
  return os.str();
}

bool matches_expectation(const Report& r, Expectation e) {
  switch (e) {
    case Expectation::Consensus:
      return r.consensus.classification == Classification::AsymptoticallySwarmStable;
    case Expectation::SwarmStable:
      return r.swarm.classification == Classification::SwarmStable &&
             r.consensus.classification != Classification::AsymptoticallySwarmStable;
    case Expectation::SwarmUnstable:
      return r.swarm.classification == Classification::SwarmUnstable;
  }
  return false;
}

std::string trajectory_csv(const Trajectory& t, int n, int m) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "t";
  for (int i = 1; i <= m; ++i)
    for (int k = 1; k <= n; ++k) os << ",x_" << i << "_" << k;
  os << "\n";
  for (std::size_t s = 0; s < t.times.size(); ++s) {
    os << t.times[s];
    for (int i = 0; i < m; ++i)
      for (int k = 0; k < n; ++k) os << "," << t.states[s](k, i);
    os << "\n";
  }
  return os.str();
}

std::string dispersion_csv(const Trajectory& t) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "t,dispersion\n";
  for (std::size_t s = 0; s < t.times.size(); ++s)
    os << t.times[s] << "," << t.dispersion[s] << "\n";
  return os.str();
}

namespace {

struct SvgMapper {
  double x0, x1, y0, y1; // data ranges
  double w = 900, h = 500, pad = 50;
  double px(double x) const { return pad + (x - x0) / (x1 - x0 + 1e-300) * (w - 2 * pad); }
  double py(double y) const { return h - pad - (y - y0) / (y1 - y0 + 1e-300) * (h - 2 * pad); }
};

void polyline(std::ostringstream& os, const SvgMapper& map,
              const std::vector<double>& xs, const std::vector<double>& ys,
              const std::string& color, double width) {
  os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << width
     << "\" points=\"";
  for (std::size_t k = 0; k < xs.size(); ++k)
    os << map.px(xs[k]) << "," << map.py(ys[k]) << " ";
  os << "\"/>\n";
}

} // namespace

std::string trajectory_svg(const Trajectory& t, int n, int m) {
  SvgMapper map{};
  map.x0 = t.times.front();
  map.x1 = t.times.back();
  double lo = 0.0, hi = 0.0;
  for (std::size_t s = 0; s < t.times.size(); ++s) {
    lo = std::min({lo, t.states[s].minCoeff()});
    hi = std::max({hi, t.states[s].maxCoeff(), t.dispersion[s]});
  }
  map.y0 = lo;
  map.y1 = hi;

  std::ostringstream os;
  os << std::setprecision(6);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << map.w << "\" height=\""
     << map.h << "\" viewBox=\"0 0 " << map.w << " " << map.h << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  // axes
  os << "<line x1=\"" << map.pad << "\" y1=\"" << map.py(0.0) << "\" x2=\""
     << map.w - map.pad << "\" y2=\"" << map.py(0.0)
     << "\" stroke=\"#999\" stroke-width=\"1\"/>\n";
  static const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                  "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
  std::vector<double> ys(t.times.size());
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < n; ++k) {
      for (std::size_t s = 0; s < t.times.size(); ++s) ys[s] = t.states[s](k, i);
      polyline(os, map, t.times, ys, palette[(i * n + k) % 8], 1.0);
    }
  polyline(os, map, t.times, t.dispersion, "#000000", 2.0);
  os << "<text x=\"" << map.pad << "\" y=\"20\" font-family=\"sans-serif\" "
        "font-size=\"14\">state components (thin) and dispersion (thick)</text>\n";
  os << "</svg>\n";
  return os.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out << content;
    if (!out.good()) throw std::runtime_error("write failed for '" + tmp.string() + "'");
  }
  fs::rename(tmp, target);
}

} // namespace swarmstab
