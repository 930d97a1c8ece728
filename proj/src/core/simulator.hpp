#pragma once

// Exact trajectory generation through the slow/fast decomposition: the slow
// part propagates by the matrix exponential of -(L (x) A1) t, nonzero-mode
// fast components have the identically-zero smooth solution, and the zero
// mode keeps a constant fast component.

#include "criteria.hpp"

#include <vector>

namespace swarmstab {

struct ImpulseEntry {
  int mode_index;   // Laplacian mode (0-based); -1 = aggregate over modes
  int order;        // impulse order k, 0 = jump at t=0
  double magnitude; // ||N^k * discarded fast component||
};

struct ImpulseReport {
  std::vector<ImpulseEntry> entries;
  bool modal_basis_ill_conditioned = false;
  bool empty() const { return entries.empty(); }
};

/// Convention for the fast component of the Laplacian zero mode, which the
/// dynamics leave free (N xdot = 0). Swarm metrics must not depend on it.
enum class ZeroModeConvention { Preserve, Zero };

struct NetworkSystem {
  MatrixPencil pencil;
  WeightedDigraph graph;
  LaplacianAnalysis lap;
  StandardDecomposition decomp;
  int m = 0; // agents
  int n = 0; // per-agent order

  static NetworkSystem assemble(const MatrixPencil& pc, const WeightedDigraph& g);
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Mat> states; // n x m per sample, column i = agent i
  std::vector<double> dispersion;
  ImpulseReport impulse_report;
};

/// Max over agent pairs of ||x_i - x_j||_2.
double dispersion_of(const Mat& x);

struct ProjectionResult {
  Mat x0_plus;
  ImpulseReport report;
};

/// Projects X0 onto the consistent manifold: kills the fast components of
/// every nonzero Laplacian mode and records the discarded mass.
ProjectionResult consistent_projection(const NetworkSystem& sys, const Mat& x0,
                                       ZeroModeConvention conv = ZeroModeConvention::Preserve);

/// Closed-form trajectory on an ascending grid of t >= 0 sample instants.
Trajectory simulate(const NetworkSystem& sys, const Mat& x0,
                    const std::vector<double>& t_grid,
                    ZeroModeConvention conv = ZeroModeConvention::Preserve);

/// Consensus value c = sum_i nu_i x_i(0); requires a simple Laplacian zero
/// eigenvalue (use only under a consensus verdict).
Vec predicted_consensus_value(const NetworkSystem& sys, const Mat& x0);

/// Implicit-trapezoidal integration of (I (x) E) xdot = -(L (x) F) x with
/// step refinement until successive refinements agree to 1e-7. Test oracle;
/// requires consistent initial data and an impulse-free pencil.
Trajectory reference_integrate(const NetworkSystem& sys, const Mat& x0_plus,
                               const std::vector<double>& t_grid);

enum class EmpiricalClass { ConsensusLike, CriticallyStableLike, UnstableLike };

const char* to_string(EmpiricalClass c);

/// Advisory heuristic on the dispersion curve.
EmpiricalClass empirical_classify(const Trajectory& traj);

/// Uniform grid helper: `samples` points over [0, t_end], starting just
/// after zero (the t = 0+ post-jump state).
std::vector<double> uniform_grid(double t_end, int samples);

} // namespace swarmstab
