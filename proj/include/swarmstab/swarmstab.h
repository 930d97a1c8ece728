/* Public C API for the swarm-stability analyzer: scenario handles in,
 * JSON/CSV/SVG artifacts out. All functions return ss_status; string
 * getters stay valid until the owning handle is freed. */

#ifndef SWARMSTAB_H
#define SWARMSTAB_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ss_status {
  SS_OK = 0,
  SS_ERR_INVALID_INPUT = 1,  /* validation / parse / dimension errors */
  SS_ERR_INDETERMINATE = 2,  /* analysis hit a decision boundary (e.g. non-regular pencil) */
  SS_ERR_NUMERICAL = 3,      /* solver failure (singular system, no convergence) */
  SS_ERR_IO = 4,
  SS_ERR_NULL_ARGUMENT = 5
} ss_status;

typedef enum ss_verdict {
  SS_VERDICT_ASYMPTOTICALLY_SWARM_STABLE = 0,
  SS_VERDICT_SWARM_STABLE = 1,
  SS_VERDICT_SWARM_UNSTABLE = 2,
  SS_VERDICT_INDETERMINATE = 3
} ss_verdict;

typedef struct ss_scenario ss_scenario;
typedef struct ss_result ss_result;

const char* ss_version(void);

/* errbuf (may be NULL) receives a message on failure, truncated to errbuf_len. */
ss_status ss_scenario_from_file(const char* path, ss_scenario** out,
                                char* errbuf, size_t errbuf_len);
ss_status ss_scenario_from_json(const char* json_text, ss_scenario** out,
                                char* errbuf, size_t errbuf_len);
/* instance is 1, 2 or 3. */
ss_status ss_scenario_builtin(int instance, ss_scenario** out,
                              char* errbuf, size_t errbuf_len);
/* Canonical JSON form of the scenario; valid until the handle is freed. */
const char* ss_scenario_json(const ss_scenario* sc);
void ss_scenario_free(ss_scenario* sc);

/* Analysis only (report, verdicts). */
ss_status ss_analyze(const ss_scenario* sc, ss_result** out,
                     char* errbuf, size_t errbuf_len);
/* Analysis plus trajectory simulation (CSV/SVG artifacts populated). */
ss_status ss_simulate(const ss_scenario* sc, ss_result** out,
                      char* errbuf, size_t errbuf_len);

ss_status ss_result_verdict_consensus(const ss_result* r, ss_verdict* out);
ss_status ss_result_verdict_swarm(const ss_result* r, ss_verdict* out);
const char* ss_result_report_json(const ss_result* r);
const char* ss_result_report_text(const ss_result* r);
/* NULL unless the result came from ss_simulate. */
const char* ss_result_trajectory_csv(const ss_result* r);
const char* ss_result_dispersion_csv(const ss_result* r);
const char* ss_result_plot_svg(const ss_result* r);
void ss_result_free(ss_result* r);

/* Runs the cross-oracle suites; writes the human summary into buf.
 * Returns SS_OK when every suite passes. */
ss_status ss_selftest(unsigned long long seed, char* buf, size_t buf_len);

#ifdef __cplusplus
}
#endif

#endif /* SWARMSTAB_H */
