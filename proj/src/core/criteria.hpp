#pragma once

// Consensus and swarm-stability criteria: the spanning-tree condition paired
// with sign tests on the products of nonzero Laplacian eigenvalues and finite
// pencil eigenvalues, plus semisimplicity checks for the critical case.

#include "graph.hpp"
#include "pencil.hpp"

#include <optional>
#include <string>
#include <vector>

namespace swarmstab {

enum class Classification {
  AsymptoticallySwarmStable,
  SwarmStable, // critical, not asymptotic
  SwarmUnstable,
  Indeterminate,
};

const char* to_string(Classification c);

struct ProductEntry {
  int laplacian_index;  // 0-based index into the Laplacian spectrum
  int finite_index;     // 0-based index into the finite eigenvalues
  Complex lambda;       // nonzero Laplacian eigenvalue
  Complex mu;           // finite pencil eigenvalue
  Complex product;      // lambda * mu
};

struct ProductTable {
  std::vector<ProductEntry> entries;
  double min_re() const;
};

struct StabilityVerdict {
  Classification classification = Classification::Indeterminate;
  std::vector<std::string> reasons;
  ProductTable products;
  std::optional<std::string> corollary; // "corollary-1" / "corollary-2" when a fast path fired
};

/// Everything the criteria need about one network system.
struct SystemAnalysis {
  LaplacianAnalysis lap;
  MatrixPencil pencil;
  bool regular = false;
  bool impulse_free = false;
  Spectrum finite; // empty unless regular
  std::optional<StandardDecomposition> decomp;

  static SystemAnalysis analyze(const WeightedDigraph& g, const MatrixPencil& pc);
};

/// Threshold under which Re(lambda * mu) counts as "on the boundary".
double strict_tolerance(const SystemAnalysis& sys);

/// All products lambda_i * mu_j over nonzero Laplacian eigenvalues.
ProductTable product_table(const LaplacianAnalysis& lap, const Spectrum& finite);

/// Proposition 1: spanning tree + all products with positive real part.
StabilityVerdict check_consensus(const SystemAnalysis& sys);

/// Proposition 2: admissible stability of every pencil (E, -lambda_i F),
/// with the Jordan coupling restriction when L is undiagonalizable.
StabilityVerdict check_swarm_stability(const SystemAnalysis& sys);

/// Corollary 1 (all-real finite eigenvalues) or Corollary 2 (symmetric W).
/// Absent when neither precondition applies.
std::optional<StabilityVerdict> corollary_fast_paths(const SystemAnalysis& sys,
                                                     const WeightedDigraph& g);

} // namespace swarmstab
