#include "criteria.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace swarmstab {

const char* to_string(Classification c) {
  switch (c) {
    case Classification::AsymptoticallySwarmStable: return "asymptotically-swarm-stable";
    case Classification::SwarmStable: return "swarm-stable";
    case Classification::SwarmUnstable: return "swarm-unstable";
    case Classification::Indeterminate: return "indeterminate";
  }
  return "?";
}

double ProductTable::min_re() const {
  double m = std::numeric_limits<double>::infinity();
  for (const ProductEntry& e : entries) m = std::min(m, e.product.real());
  return m;
}

SystemAnalysis SystemAnalysis::analyze(const WeightedDigraph& g, const MatrixPencil& pc) {
  SystemAnalysis s{analyze_laplacian(g), pc};
  CharPoly cp = char_poly(pc);
  s.regular = cp.regular;
  if (s.regular) {
    s.finite = poly_roots(cp.p);
    s.impulse_free = (cp.degree() == pc.rank_e());
    s.decomp = standard_decomposition(pc);
  }
  return s;
}

double strict_tolerance(const SystemAnalysis& sys) {
  double max_mu = 0.0;
  for (const Complex& mu : sys.finite.values) max_mu = std::max(max_mu, std::abs(mu));
  return 1e-9 * (1.0 + sys.lap.laplacian.norm()) * (1.0 + max_mu);
}

ProductTable product_table(const LaplacianAnalysis& lap, const Spectrum& finite) {
  ProductTable t;
  const double ztol = Spectrum::cluster_tol(lap.laplacian.norm());
  for (std::size_t i = 0; i < lap.spectrum.values.size(); ++i) {
    const Complex lam = lap.spectrum.values[i];
    if (std::abs(lam) <= ztol) continue; // zero mode excluded (i = 2..m)
    for (std::size_t j = 0; j < finite.values.size(); ++j) {
      const Complex mu = finite.values[j];
      t.entries.push_back({static_cast<int>(i), static_cast<int>(j), lam, mu, lam * mu});
    }
  }
  return t;
}

namespace {

std::string fmt_complex(Complex z) {
  std::ostringstream os;
  os << z.real();
  if (z.imag() != 0.0) os << (z.imag() > 0 ? "+" : "") << z.imag() << "i";
  return os.str();
}

/// True iff mu is a semisimple eigenvalue of A1 (rank(A1 - mu I) = n1 - q).
bool semisimple_in_slow_block(const StandardDecomposition& d, Complex mu, int multiplicity) {
  if (multiplicity <= 1) return true;
  CMat shifted = d.a1.cast<Complex>() - mu * CMat::Identity(d.n1, d.n1);
  return rank(shifted) == d.n1 - multiplicity;
}

int finite_multiplicity(const SystemAnalysis& sys, Complex mu) {
  double tol = Spectrum::cluster_tol(sys.pencil.f.norm() + sys.pencil.e.norm());
  int q = 0;
  for (const Complex& v : sys.finite.values)
    if (std::abs(v - mu) <= tol) ++q;
  return std::max(q, 1);
}

} // namespace

StabilityVerdict check_swarm_stability(const SystemAnalysis& sys) {
  StabilityVerdict v;
  if (!sys.regular) {
    v.classification = Classification::Indeterminate;
    v.reasons.push_back("pencil not regular");
    return v;
  }
  if (!sys.impulse_free) {
    v.classification = Classification::Indeterminate;
    v.reasons.push_back("Prop. 2 precondition: pulse free");
    return v;
  }
  v.products = product_table(sys.lap, sys.finite);
  const double tol = strict_tolerance(sys);
  const StandardDecomposition& d = *sys.decomp;

  bool stable = true;
  for (const ProductEntry& e : v.products.entries) {
    // (E, -lambda F) has finite eigenvalues -lambda*mu; stability needs
    // Re(-lambda*mu) <= 0, i.e. Re(lambda*mu) >= 0.
    double re = e.product.real();
    if (re < -tol) {
      std::ostringstream os;
      os << "eigenvalue " << fmt_complex(-e.product) << " of pencil (E, -("
         << fmt_complex(e.lambda) << ")F) has positive real part";
      v.reasons.push_back(os.str());
      stable = false;
      continue;
    }
    if (std::abs(re) <= tol) {
      int q = finite_multiplicity(sys, e.mu);
      if (!semisimple_in_slow_block(d, e.mu, q)) {
        std::ostringstream os;
        os << "imaginary-axis eigenvalue " << fmt_complex(-e.product)
           << " is defective (finite eigenvalue " << fmt_complex(e.mu) << ")";
        v.reasons.push_back(os.str());
        stable = false;
      }
      if (std::abs(e.mu) <= tol) {
        v.reasons.push_back("finite eigenvalue 0 accepted per the literal "
                            "'except zero' reading (semisimple in A1)");
      }
    }
  }

  if (!sys.lap.diagonalizable) {
    v.reasons.push_back("Laplacian is undiagonalizable");
    for (const Complex& mu : sys.finite.values) {
      if (std::abs(mu.real()) <= tol && std::abs(mu) > tol) {
        std::ostringstream os;
        os << "undiagonalizable L with imaginary-axis finite eigenvalue "
           << fmt_complex(mu);
        v.reasons.push_back(os.str());
        stable = false;
        break;
      }
    }
  } else {
    v.reasons.push_back("Laplacian is diagonalizable");
  }

  v.classification = stable ? Classification::SwarmStable : Classification::SwarmUnstable;
  return v;
}

StabilityVerdict check_consensus(const SystemAnalysis& sys) {
  StabilityVerdict v;
  if (!sys.regular) {
    v.classification = Classification::Indeterminate;
    v.reasons.push_back("pencil not regular");
    return v;
  }
  v.products = product_table(sys.lap, sys.finite);
  const double tol = strict_tolerance(sys);
  v.reasons.push_back(sys.lap.has_spanning_tree ? "spanning tree present"
                                                : "no spanning tree");

  const double min_re = v.products.entries.empty()
                            ? std::numeric_limits<double>::infinity()
                            : v.products.min_re();
  if (sys.lap.has_spanning_tree && min_re > tol) {
    v.classification = Classification::AsymptoticallySwarmStable;
    v.reasons.push_back("all products lambda_i * mu_j have positive real part");
    return v;
  }

  bool negative = false;
  for (const ProductEntry& e : v.products.entries)
    if (e.product.real() < -tol) {
      std::ostringstream os;
      os << "product " << fmt_complex(e.product) << " (lambda=" << fmt_complex(e.lambda)
         << ", mu=" << fmt_complex(e.mu) << ") has negative real part";
      v.reasons.push_back(os.str());
      negative = true;
    }
  if (negative) {
    v.classification = Classification::SwarmUnstable;
    return v;
  }

  // Not consensus but no strict violation: the boundary (or a missing tree)
  // defers to the critical swarm-stability test.
  if (!v.products.entries.empty() && std::abs(min_re) <= tol)
    v.reasons.push_back("product real part within the tolerance band of zero");
  StabilityVerdict crit = check_swarm_stability(sys);
  v.classification = crit.classification;
  for (const std::string& r : crit.reasons) v.reasons.push_back(r);
  if (crit.classification == Classification::Indeterminate &&
      !v.products.entries.empty() && std::abs(min_re) <= tol) {
    v.reasons.push_back("min Re(lambda*mu) on the decision boundary and Prop. 2 "
                        "preconditions unavailable");
  }
  return v;
}

std::optional<StabilityVerdict> corollary_fast_paths(const SystemAnalysis& sys,
                                                     const WeightedDigraph& g) {
  if (!sys.regular) return std::nullopt;
  const double tol = strict_tolerance(sys);

  bool all_real = true;
  for (const Complex& mu : sys.finite.values)
    if (std::abs(mu.imag()) > tol) all_real = false;
  const bool symmetric = (g.w - g.w.transpose()).norm() <= 1e-12 * (1.0 + g.w.norm());
  if (!all_real && !symmetric) return std::nullopt;

  bool consensus;
  StabilityVerdict v;
  if (all_real) {
    v.corollary = "corollary-1";
    bool pos = !sys.finite.values.empty();
    for (const Complex& mu : sys.finite.values)
      if (mu.real() <= tol) pos = false;
    consensus = pos && sys.lap.has_spanning_tree;
    v.reasons.push_back("all finite eigenvalues real");
  } else {
    v.corollary = "corollary-2";
    bool pos = !sys.finite.values.empty();
    for (const Complex& mu : sys.finite.values)
      if (mu.real() <= tol) pos = false;
    // For symmetric W connectivity coincides with the spanning-tree test.
    consensus = pos && sys.lap.has_spanning_tree;
    v.reasons.push_back("symmetric network topology");
  }
  v.products = product_table(sys.lap, sys.finite);
  if (consensus) {
    v.classification = Classification::AsymptoticallySwarmStable;
  } else {
    StabilityVerdict full = check_consensus(sys);
    v.classification = full.classification;
    for (const std::string& r : full.reasons) v.reasons.push_back(r);
  }
  return v;
}

} // namespace swarmstab
