#pragma once

// Scenario ingestion (JSON), built-in paper instances, report assembly and
// trajectory/CSV/SVG emission.

#include "simulator.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace swarmstab {

struct Tolerances {
  std::optional<double> rank;
  std::optional<double> eig;
};

enum class Expectation { Consensus, SwarmStable, SwarmUnstable };

const char* to_string(Expectation e);

struct Scenario {
  std::string name;
  std::string comment;
  Mat e;
  Mat f;
  Mat w;
  Mat x0; // n x m, column i = agent i
  double t_end = 1.0;
  int samples = 400;
  Tolerances tolerances;
  std::optional<Expectation> expect;

  int n() const { return static_cast<int>(e.rows()); }
  int m() const { return static_cast<int>(w.rows()); }
};

/// Thrown by scenario validation; carries every problem found, not just the
/// first.
class ScenarioError : public std::runtime_error {
public:
  explicit ScenarioError(std::vector<std::string> errors);
  const std::vector<std::string>& errors() const { return errors_; }

private:
  std::vector<std::string> errors_;
};

Scenario parse_scenario_json(const nlohmann::json& j);
Scenario parse_scenario_file(const std::string& path);
nlohmann::json scenario_to_json(const Scenario& s);

/// The three embedded numerical instances (1-based).
Scenario paper_instance(int which);

struct Report {
  Scenario scenario;
  SystemAnalysis analysis;
  StabilityVerdict consensus;
  StabilityVerdict swarm;
  std::optional<StabilityVerdict> corollary;
  std::optional<Vec> consensus_estimate;
  std::vector<std::string> warnings;
};

Report analyze_scenario(const Scenario& s);

nlohmann::json report_to_json(const Report& r);
std::string report_to_text(const Report& r);

/// True verdict-vs-expectation check for the CI gate.
bool matches_expectation(const Report& r, Expectation e);

// Trajectory emission.
std::string trajectory_csv(const Trajectory& t, int n, int m);
std::string dispersion_csv(const Trajectory& t);
std::string trajectory_svg(const Trajectory& t, int n, int m);

/// Write `content` atomically (temp file + rename).
void write_file_atomic(const std::string& path, const std::string& content);

} // namespace swarmstab
