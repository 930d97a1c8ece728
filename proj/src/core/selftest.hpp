#pragma once

// Cross-oracle self-check suites: spanning-tree/zero-eigenvalue equivalence,
// char-poly vs decomposition route agreement, Weierstrass reconstruction
// residuals, Kronecker spectrum and scaling laws.

#include "matkit.hpp"
#include "graph.hpp"
#include "pencil.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace swarmstab {

struct SelftestResult {
  int passed = 0;
  int failed = 0;
  std::vector<std::string> lines; // one "[pass|FAIL] suite: detail" per suite
  bool ok() const { return failed == 0; }
  std::string summary() const;
};

/// Runs every suite at the given sample counts. Deterministic per seed.
SelftestResult run_selftest(std::uint64_t seed, int graph_cases = 60,
                            int pencil_cases = 60, int kron_cases = 40);

// Seeded generators shared with the test suites.
WeightedDigraph random_digraph(std::mt19937_64& rng, int max_order = 7);
/// Random regular pencil of order up to max_order with singular E.
MatrixPencil random_regular_pencil(std::mt19937_64& rng, int max_order = 8);
Mat random_matrix(std::mt19937_64& rng, int rows, int cols, double scale = 1.0);

} // namespace swarmstab
