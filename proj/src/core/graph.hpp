#pragma once

// Weighted digraph model, Laplacian construction and spectral/structural
// analysis (spanning-tree reachability, diagonalizability, left zero vector).

#include "matkit.hpp"

#include <cstdint>
#include <optional>

namespace swarmstab {

/// m x m nonnegative adjacency with zero diagonal. w(i,j) > 0 means vertex j
/// is vertex i's neighbor, i.e. information flows j -> i.
struct WeightedDigraph {
  Mat w;

  int order() const { return static_cast<int>(w.rows()); }

  /// Validates shape, nonnegativity, zero diagonal and finiteness.
  static WeightedDigraph from_adjacency(Mat w);
};

struct LaplacianAnalysis {
  Mat laplacian;
  Spectrum spectrum;
  int zero_multiplicity = 0;
  bool has_spanning_tree = false;
  bool diagonalizable = false;
  /// Left zero eigenvector, normalized so nu . ones = 1. Present only when
  /// the zero eigenvalue is simple.
  std::optional<Vec> left_zero_vector;
};

/// L = diag(row sums of W) - W; rows sum to zero exactly.
Mat laplacian(const WeightedDigraph& g);

/// True iff some root reaches every vertex along arcs j -> i.
bool has_spanning_tree(const WeightedDigraph& g);

LaplacianAnalysis analyze_laplacian(const WeightedDigraph& g);

/// Multiplicative jitter on the positive weights until the Laplacian is
/// diagonalizable with a Frobenius gap below eps. Deterministic per seed.
/// Already-diagonalizable inputs are returned unchanged.
WeightedDigraph perturb_to_diagonalizable(const WeightedDigraph& g, double eps,
                                          std::uint64_t seed);

} // namespace swarmstab
