// Command-line front end: scenario analysis, trajectory simulation, the
// built-in numerical instances and the cross-oracle selftest. Talks to the
// core exclusively through the shared-library C API.

#include <swarmstab/swarmstab.h>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitIndeterminate = 2;
constexpr int kExitExpectMismatch = 3;

struct ScenarioDeleter {
  void operator()(ss_scenario* s) const { ss_scenario_free(s); }
};
struct ResultDeleter {
  void operator()(ss_result* r) const { ss_result_free(r); }
};
using ScenarioPtr = std::unique_ptr<ss_scenario, ScenarioDeleter>;
using ResultPtr = std::unique_ptr<ss_result, ResultDeleter>;

struct Options {
  std::string out_dir;
  int samples = 0; // 0 = scenario default
  double tol_rank = 0.0;
  double tol_eig = 0.0;
  unsigned long long seed = 1;
  std::string expect;
  std::string format = "text";
};

int status_to_exit(ss_status st) {
  switch (st) {
    case SS_OK: return kExitOk;
    case SS_ERR_INDETERMINATE: return kExitIndeterminate;
    default: return kExitInvalid;
  }
}

void write_atomic(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out << content;
  }
  fs::rename(tmp, path);
}

ScenarioPtr apply_overrides(ScenarioPtr sc, const Options& opt, char* err, size_t errlen) {
  if (opt.samples == 0 && opt.tol_rank == 0.0 && opt.tol_eig == 0.0 && opt.expect.empty())
    return sc;
  json j = json::parse(ss_scenario_json(sc.get()));
  if (opt.samples > 0) j["samples"] = opt.samples;
  if (opt.tol_rank > 0.0) j["tolerances"]["rank"] = opt.tol_rank;
  if (opt.tol_eig > 0.0) j["tolerances"]["eig"] = opt.tol_eig;
  if (!opt.expect.empty()) j["expect"] = opt.expect;
  ss_scenario* raw = nullptr;
  if (ss_scenario_from_json(j.dump().c_str(), &raw, err, errlen) != SS_OK)
    return nullptr;
  return ScenarioPtr(raw);
}

bool expectation_met(const std::string& expect, const ResultPtr& res) {
  ss_verdict cons{}, swarm{};
  ss_result_verdict_consensus(res.get(), &cons);
  ss_result_verdict_swarm(res.get(), &swarm);
  if (expect == "consensus") return cons == SS_VERDICT_ASYMPTOTICALLY_SWARM_STABLE;
  if (expect == "swarm_stable")
    return swarm == SS_VERDICT_SWARM_STABLE &&
           cons != SS_VERDICT_ASYMPTOTICALLY_SWARM_STABLE;
  if (expect == "swarm_unstable") return swarm == SS_VERDICT_SWARM_UNSTABLE;
  return false;
}

std::string scenario_expect(const ScenarioPtr& sc) {
  json j = json::parse(ss_scenario_json(sc.get()));
  return j.value("expect", "");
}

void print_report(const ResultPtr& res, const std::string& format) {
  if (format == "json")
    std::cout << ss_result_report_json(res.get()) << "\n";
  else
    std::cout << ss_result_report_text(res.get());
}

int finish_analysis(ScenarioPtr sc, ss_status st, ResultPtr res, const Options& opt,
                    const char* err) {
  if (!res) {
    std::cerr << "error: " << err << "\n";
    return status_to_exit(st);
  }
  print_report(res, opt.format);
  if (!opt.out_dir.empty()) {
    fs::create_directories(opt.out_dir);
    write_atomic(fs::path(opt.out_dir) / "report.json", ss_result_report_json(res.get()));
    if (const char* csv = ss_result_trajectory_csv(res.get()))
      write_atomic(fs::path(opt.out_dir) / "trajectory.csv", csv);
    if (const char* csv = ss_result_dispersion_csv(res.get()))
      write_atomic(fs::path(opt.out_dir) / "dispersion.csv", csv);
    if (const char* svg = ss_result_plot_svg(res.get()))
      write_atomic(fs::path(opt.out_dir) / "plot.svg", svg);
  }
  if (st == SS_ERR_INDETERMINATE) {
    std::cerr << "analysis indeterminate: " << err << "\n";
    return kExitIndeterminate;
  }
  std::string expect = scenario_expect(sc);
  if (!expect.empty() && !expectation_met(expect, res)) {
    std::cerr << "expectation mismatch: wanted " << expect << "\n";
    return kExitExpectMismatch;
  }
  return kExitOk;
}

int run_scenario(ScenarioPtr sc, bool with_trajectory, const Options& opt) {
  char err[1024] = {0};
  sc = apply_overrides(std::move(sc), opt, err, sizeof err);
  if (!sc) {
    std::cerr << "error: " << err << "\n";
    return kExitInvalid;
  }
  ss_result* raw = nullptr;
  ss_status st = with_trajectory ? ss_simulate(sc.get(), &raw, err, sizeof err)
                                 : ss_analyze(sc.get(), &raw, err, sizeof err);
  return finish_analysis(std::move(sc), st, ResultPtr(raw), opt, err);
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Swarm-stability analysis and simulation of LTI descriptor "
               "compartmental networks"};
  app.require_subcommand(1);

  Options opt;
  std::string scenario_path;
  int instance = 1;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--out", opt.out_dir, "output directory for report/trajectory files");
    cmd->add_option("--samples", opt.samples, "trajectory sample count override");
    cmd->add_option("--tol-rank", opt.tol_rank, "SVD rank tolerance override");
    cmd->add_option("--tol-eig", opt.tol_eig, "eigenvalue cluster tolerance override");
    cmd->add_option("--seed", opt.seed, "RNG seed (selftest)");
    cmd->add_option("--expect", opt.expect, "expected verdict, exit 3 on mismatch")
        ->check(CLI::IsMember({"consensus", "swarm_stable", "swarm_unstable"}));
    cmd->add_option("--format", opt.format, "report format")
        ->check(CLI::IsMember({"json", "text"}));
  };

  CLI::App* analyze = app.add_subcommand("analyze", "analyze a scenario file");
  analyze->add_option("scenario", scenario_path, "scenario JSON file")->required();
  add_common(analyze);

  CLI::App* simulate = app.add_subcommand("simulate", "analyze and simulate a scenario");
  simulate->add_option("scenario", scenario_path, "scenario JSON file")->required();
  add_common(simulate);

  CLI::App* paper = app.add_subcommand("paper", "run a built-in numerical instance");
  paper->add_option("instance", instance, "instance number")->check(CLI::Range(1, 3))->required();
  add_common(paper);

  CLI::App* selftest = app.add_subcommand("selftest", "run the cross-oracle suites");
  add_common(selftest);

  CLI11_PARSE(app, argc, argv);

  try {
    char err[1024] = {0};
    if (analyze->parsed() || simulate->parsed()) {
      ss_scenario* raw = nullptr;
      ss_status st = ss_scenario_from_file(scenario_path.c_str(), &raw, err, sizeof err);
      if (st != SS_OK) {
        std::cerr << "error: " << err << "\n";
        return kExitInvalid;
      }
      return run_scenario(ScenarioPtr(raw), simulate->parsed(), opt);
    }
    if (paper->parsed()) {
      ss_scenario* raw = nullptr;
      ss_status st = ss_scenario_builtin(instance, &raw, err, sizeof err);
      if (st != SS_OK) {
        std::cerr << "error: " << err << "\n";
        return kExitInvalid;
      }
      return run_scenario(ScenarioPtr(raw), true, opt);
    }
    // selftest
    std::string buf(16384, '\0');
    ss_status st = ss_selftest(opt.seed, buf.data(), buf.size());
    std::cout << buf.c_str();
    return st == SS_OK ? kExitOk : kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
}
