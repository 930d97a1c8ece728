#include "swarmstab/swarmstab.h"

#include "../core/scenario.hpp"
#include "../core/selftest.hpp"

#include <cstring>
#include <string>

using namespace swarmstab;

struct ss_scenario {
  Scenario scenario;
  std::string json_cache;
};

struct ss_result {
  Report report;
  std::string report_json;
  std::string report_text;
  std::string trajectory_csv;
  std::string dispersion_csv;
  std::string plot_svg;
  bool has_trajectory = false;
};

namespace {

void set_err(char* buf, size_t len, const std::string& msg) {
  if (!buf || len == 0) return;
  std::size_t n = std::min(msg.size(), len - 1);
  std::memcpy(buf, msg.data(), n);
  buf[n] = '\0';
}

template <class Fn>
ss_status guarded(char* errbuf, size_t errbuf_len, Fn&& fn) {
  try {
    return fn();
  } catch (const ScenarioError& e) {
    std::string all;
    for (const std::string& s : e.errors()) {
      if (!all.empty()) all += "; ";
      all += s;
    }
    set_err(errbuf, errbuf_len, all.empty() ? e.what() : all);
    return SS_ERR_INVALID_INPUT;
  } catch (const DomainError& e) {
    set_err(errbuf, errbuf_len, e.what());
    return SS_ERR_INVALID_INPUT;
  } catch (const NumericalError& e) {
    set_err(errbuf, errbuf_len, e.what());
    return SS_ERR_NUMERICAL;
  } catch (const std::exception& e) {
    set_err(errbuf, errbuf_len, e.what());
    return SS_ERR_IO;
  }
}

ss_result* build_result(const Scenario& sc, bool with_trajectory) {
  auto* r = new ss_result;
  r->report = analyze_scenario(sc);
  if (with_trajectory) {
    NetworkSystem sys = NetworkSystem::assemble(MatrixPencil::make(sc.e, sc.f),
                                                WeightedDigraph::from_adjacency(sc.w));
    Trajectory traj = simulate(sys, sc.x0, uniform_grid(sc.t_end, sc.samples));
    r->trajectory_csv = trajectory_csv(traj, sc.n(), sc.m());
    r->dispersion_csv = dispersion_csv(traj);
    r->plot_svg = trajectory_svg(traj, sc.n(), sc.m());
    r->has_trajectory = true;
  }
  r->report_json = report_to_json(r->report).dump(2);
  r->report_text = report_to_text(r->report);
  return r;
}

ss_verdict to_c_verdict(Classification c) {
  switch (c) {
    case Classification::AsymptoticallySwarmStable:
      return SS_VERDICT_ASYMPTOTICALLY_SWARM_STABLE;
    case Classification::SwarmStable: return SS_VERDICT_SWARM_STABLE;
    case Classification::SwarmUnstable: return SS_VERDICT_SWARM_UNSTABLE;
    case Classification::Indeterminate: return SS_VERDICT_INDETERMINATE;
  }
  return SS_VERDICT_INDETERMINATE;
}

} // namespace

extern "C" {

const char* ss_version(void) { return "0.1.0"; }

ss_status ss_scenario_from_file(const char* path, ss_scenario** out,
                                char* errbuf, size_t errbuf_len) {
  if (!path || !out) return SS_ERR_NULL_ARGUMENT;
  return guarded(errbuf, errbuf_len, [&] {
    auto* sc = new ss_scenario{parse_scenario_file(path), {}};
    sc->json_cache = scenario_to_json(sc->scenario).dump(2);
    *out = sc;
    return SS_OK;
  });
}

ss_status ss_scenario_from_json(const char* json_text, ss_scenario** out,
                                char* errbuf, size_t errbuf_len) {
  if (!json_text || !out) return SS_ERR_NULL_ARGUMENT;
  return guarded(errbuf, errbuf_len, [&] {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
      throw ScenarioError({std::string("JSON parse error: ") + e.what()});
    }
    auto* sc = new ss_scenario{parse_scenario_json(j), {}};
    sc->json_cache = scenario_to_json(sc->scenario).dump(2);
    *out = sc;
    return SS_OK;
  });
}

ss_status ss_scenario_builtin(int instance, ss_scenario** out,
                              char* errbuf, size_t errbuf_len) {
  if (!out) return SS_ERR_NULL_ARGUMENT;
  return guarded(errbuf, errbuf_len, [&] {
    auto* sc = new ss_scenario{paper_instance(instance), {}};
    sc->json_cache = scenario_to_json(sc->scenario).dump(2);
    *out = sc;
    return SS_OK;
  });
}

const char* ss_scenario_json(const ss_scenario* sc) {
  return sc ? sc->json_cache.c_str() : nullptr;
}

void ss_scenario_free(ss_scenario* sc) { delete sc; }

ss_status ss_analyze(const ss_scenario* sc, ss_result** out,
                     char* errbuf, size_t errbuf_len) {
  if (!sc || !out) return SS_ERR_NULL_ARGUMENT;
  ss_status st = guarded(errbuf, errbuf_len, [&] {
    *out = build_result(sc->scenario, false);
    return SS_OK;
  });
  if (st == SS_OK && !(*out)->report.analysis.regular) {
    set_err(errbuf, errbuf_len, "pencil not regular: verdicts indeterminate");
    return SS_ERR_INDETERMINATE;
  }
  return st;
}

ss_status ss_simulate(const ss_scenario* sc, ss_result** out,
                      char* errbuf, size_t errbuf_len) {
  if (!sc || !out) return SS_ERR_NULL_ARGUMENT;
  return guarded(errbuf, errbuf_len, [&] {
    *out = build_result(sc->scenario, true);
    return SS_OK;
  });
}

ss_status ss_result_verdict_consensus(const ss_result* r, ss_verdict* out) {
  if (!r || !out) return SS_ERR_NULL_ARGUMENT;
  *out = to_c_verdict(r->report.consensus.classification);
  return SS_OK;
}

ss_status ss_result_verdict_swarm(const ss_result* r, ss_verdict* out) {
  if (!r || !out) return SS_ERR_NULL_ARGUMENT;
  *out = to_c_verdict(r->report.swarm.classification);
  return SS_OK;
}

const char* ss_result_report_json(const ss_result* r) {
  return r ? r->report_json.c_str() : nullptr;
}

const char* ss_result_report_text(const ss_result* r) {
  return r ? r->report_text.c_str() : nullptr;
}

const char* ss_result_trajectory_csv(const ss_result* r) {
  return (r && r->has_trajectory) ? r->trajectory_csv.c_str() : nullptr;
}

const char* ss_result_dispersion_csv(const ss_result* r) {
  return (r && r->has_trajectory) ? r->dispersion_csv.c_str() : nullptr;
}

const char* ss_result_plot_svg(const ss_result* r) {
  return (r && r->has_trajectory) ? r->plot_svg.c_str() : nullptr;
}

void ss_result_free(ss_result* r) { delete r; }

ss_status ss_selftest(unsigned long long seed, char* buf, size_t buf_len) {
  SelftestResult res;
  ss_status st = guarded(buf, buf_len, [&] {
    res = run_selftest(seed);
    return SS_OK;
  });
  if (st != SS_OK) return st;
  set_err(buf, buf_len, res.summary());
  return res.ok() ? SS_OK : SS_ERR_NUMERICAL;
}

} // extern "C"
