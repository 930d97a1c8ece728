#include "selftest.hpp"

#include <sstream>

namespace swarmstab {

std::string SelftestResult::summary() const {
  std::ostringstream os;
  for (const std::string& l : lines) os << l << "\n";
  os << (ok() ? "selftest: all suites passed" : "selftest: FAILURES") << " ("
     << passed << " passed, " << failed << " failed)\n";
  return os.str();
}

Mat random_matrix(std::mt19937_64& rng, int rows, int cols, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Mat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = u(rng);
  return m;
}

WeightedDigraph random_digraph(std::mt19937_64& rng, int max_order) {
  std::uniform_int_distribution<int> order(1, max_order);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int m = order(rng);
  std::uniform_real_distribution<double> density(0.15, 0.9);
  const double p = density(rng);
  Mat w = Mat::Zero(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (i != j && u(rng) < p) w(i, j) = 0.25 + 2.0 * u(rng);
  return WeightedDigraph::from_adjacency(w);
}

MatrixPencil random_regular_pencil(std::mt19937_64& rng, int max_order) {
  std::uniform_int_distribution<int> order(2, max_order);
  const int n = order(rng);
  std::uniform_int_distribution<int> rank_pick(1, n);
  const int r = rank_pick(rng);
  // E with prescribed rank via a product of random full-rank factors.
  Mat e = random_matrix(rng, n, r) * random_matrix(rng, r, n);
  Mat f = random_matrix(rng, n, n);
  return MatrixPencil::make(std::move(e), std::move(f));
}

namespace {

struct Suite {
  SelftestResult& out;
  void record(const std::string& name, bool ok, const std::string& detail) {
    std::ostringstream os;
    os << (ok ? "[pass] " : "[FAIL] ") << name;
    if (!detail.empty()) os << ": " << detail;
    out.lines.push_back(os.str());
    (ok ? out.passed : out.failed) += 1;
  }
};

/// Skip digraphs whose second-smallest |eigenvalue| sits near the cluster
/// tolerance; the equivalence is only claimed away from the boundary.
bool near_tolerance_boundary(const LaplacianAnalysis& a) {
  const double ctol = Spectrum::cluster_tol(a.laplacian.norm());
  for (const Complex& v : a.spectrum.values) {
    double mag = std::abs(v);
    if (mag > 0.1 * ctol && mag < 10.0 * ctol) return true;
  }
  return false;
}

} // namespace

SelftestResult run_selftest(std::uint64_t seed, int graph_cases, int pencil_cases,
                            int kron_cases) {
  SelftestResult res;
  Suite suite{res};
  std::mt19937_64 rng(seed);

  // Spanning tree <=> simple zero eigenvalue.
  {
    int checked = 0, skipped = 0, bad = 0;
    std::string first_bad;
    while (checked < graph_cases && skipped < graph_cases * 20) {
      WeightedDigraph g = random_digraph(rng);
      LaplacianAnalysis a = analyze_laplacian(g);
      if (near_tolerance_boundary(a)) {
        ++skipped;
        continue;
      }
      ++checked;
      if (a.has_spanning_tree != (a.zero_multiplicity == 1)) {
        ++bad;
        if (first_bad.empty()) {
          std::ostringstream os;
          os << "m=" << g.order() << " tree=" << a.has_spanning_tree
             << " zero_mult=" << a.zero_multiplicity;
          first_bad = os.str();
        }
      }
    }
    std::ostringstream os;
    os << checked << " digraphs, " << skipped << " boundary cases skipped";
    if (bad) os << "; first disagreement " << first_bad;
    suite.record("lemma3-equivalence", bad == 0 && checked == graph_cases, os.str());
  }

  // Char-poly roots equal the slow-block spectrum; reconstruction residuals;
  // impulse-free quadruple equivalence.
  {
    int bad_route = 0, bad_recon = 0, bad_impulse = 0;
    double worst_route = 0.0, worst_recon = 0.0;
    for (int c = 0; c < pencil_cases; ++c) {
      MatrixPencil pc = random_regular_pencil(rng);
      CharPoly cp = char_poly(pc);
      if (!cp.regular) continue; // measure-zero, regenerating not worth it
      StandardDecomposition d = standard_decomposition(pc);
      Spectrum via_poly = poly_roots(cp.p);
      Spectrum via_slow = d.n1 > 0 ? eig(d.a1).spectrum : Spectrum{};
      if (via_poly.values.size() != via_slow.values.size()) {
        ++bad_route;
      } else if (!via_poly.values.empty()) {
        double mm = spectrum_mismatch(via_poly, via_slow);
        double scale = 1.0 + std::abs(via_poly.values.front());
        for (const Complex& v : via_poly.values)
          scale = std::max(scale, 1.0 + std::abs(v));
        worst_route = std::max(worst_route, mm / scale);
        if (mm > 1e-6 * scale) ++bad_route;
      }
      const int n = pc.order();
      Mat target_e = Mat::Zero(n, n);
      target_e.topLeftCorner(d.n1, d.n1) = Mat::Identity(d.n1, d.n1);
      target_e.bottomRightCorner(d.n2, d.n2) = d.n;
      Mat target_f = Mat::Zero(n, n);
      target_f.topLeftCorner(d.n1, d.n1) = d.a1;
      target_f.bottomRightCorner(d.n2, d.n2) = Mat::Identity(d.n2, d.n2);
      double re = (d.q * pc.e * d.p - target_e).norm() / (pc.e.norm() + 1.0);
      double rf = (d.q * pc.f * d.p - target_f).norm() / (pc.f.norm() + 1.0);
      worst_recon = std::max({worst_recon, re, rf});
      if (re > 1e-8 || rf > 1e-8) ++bad_recon;
      bool by_degree = cp.degree() == pc.rank_e();
      bool by_nilpotent = d.n2 == 0 || rank(d.n) == 0;
      bool by_index = d.h <= 1;
      if (by_degree != by_nilpotent || by_degree != by_index) ++bad_impulse;
    }
    {
      std::ostringstream os;
      os << pencil_cases << " pencils, worst scaled mismatch " << worst_route;
      suite.record("route-agreement", bad_route == 0, os.str());
    }
    {
      std::ostringstream os;
      os << "worst scaled residual " << worst_recon;
      suite.record("weierstrass-reconstruction", bad_recon == 0, os.str());
    }
    suite.record("impulse-free-equivalence", bad_impulse == 0, "");
  }

  // Kronecker spectrum (pairwise products) and the pencil scaling law.
  {
    int bad_kron = 0, bad_scale = 0;
    for (int c = 0; c < kron_cases; ++c) {
      std::uniform_int_distribution<int> order(2, 4);
      int na = order(rng), nb = order(rng);
      Mat a = random_matrix(rng, na, na);
      Mat b = random_matrix(rng, nb, nb);
      Spectrum sa = eig(a).spectrum, sb = eig(b).spectrum;
      Spectrum expected;
      for (const Complex& x : sa.values)
        for (const Complex& y : sb.values) expected.values.push_back(x * y);
      Spectrum got = eig(kron(a, b)).spectrum;
      double scale = 1.0 + a.norm() * b.norm();
      if (spectrum_mismatch(expected, got) > 1e-6 * scale) ++bad_kron;

      MatrixPencil pc = random_regular_pencil(rng, 5);
      CharPoly cp = char_poly(pc);
      if (!cp.regular || cp.degree() == 0) continue;
      std::uniform_real_distribution<double> u(-2.0, 2.0);
      Complex cc(u(rng), u(rng));
      if (std::abs(cc) < 0.1) cc += Complex(0.5, 0.0);
      Spectrum direct = scaled_pencil_eigenvalues(pc, cc);
      Spectrum law = poly_roots(cp.p);
      for (Complex& v : law.values) v *= cc;
      double mscale = 1.0;
      for (const Complex& v : law.values) mscale = std::max(mscale, std::abs(v));
      if (spectrum_mismatch(direct, law) > 1e-6 * mscale) ++bad_scale;
    }
    suite.record("kron-spectrum", bad_kron == 0, "");
    suite.record("pencil-scaling-law", bad_scale == 0, "");
  }

  return res;
}

} // namespace swarmstab
