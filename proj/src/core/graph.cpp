#include "graph.hpp"

#include <queue>
#include <random>
#include <sstream>

namespace swarmstab {

WeightedDigraph WeightedDigraph::from_adjacency(Mat w) {
  if (w.rows() != w.cols() || w.rows() < 1)
    throw DomainError("digraph: adjacency must be square, order >= 1");
  if (!is_finite(w)) throw DomainError("digraph: non-finite weight");
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    if (w(i, i) != 0.0) {
      std::ostringstream os;
      os << "digraph: diagonal entry w(" << i + 1 << "," << i + 1 << ") must be 0";
      throw DomainError(os.str());
    }
    for (Eigen::Index j = 0; j < w.cols(); ++j)
      if (w(i, j) < 0.0) {
        std::ostringstream os;
        os << "digraph: negative weight w(" << i + 1 << "," << j + 1 << ")";
        throw DomainError(os.str());
      }
  }
  return WeightedDigraph{std::move(w)};
}

Mat laplacian(const WeightedDigraph& g) {
  const Eigen::Index m = g.w.rows();
  Mat l = -g.w;
  for (Eigen::Index i = 0; i < m; ++i) l(i, i) = g.w.row(i).sum();
  return l;
}

bool has_spanning_tree(const WeightedDigraph& g) {
  const int m = g.order();
  for (int root = 0; root < m; ++root) {
    std::vector<bool> seen(static_cast<std::size_t>(m), false);
    std::queue<int> q;
    seen[static_cast<std::size_t>(root)] = true;
    q.push(root);
    int count = 1;
    while (!q.empty()) {
      int j = q.front();
      q.pop();
      // arc j -> i exists iff w(i,j) > 0
      for (int i = 0; i < m; ++i)
        if (!seen[static_cast<std::size_t>(i)] && g.w(i, j) > 0.0) {
          seen[static_cast<std::size_t>(i)] = true;
          q.push(i);
          ++count;
        }
    }
    if (count == m) return true;
  }
  return false;
}

namespace {

bool is_diagonalizable(const Mat& l, const Spectrum& spec) {
  const int m = static_cast<int>(l.rows());
  double tol = Spectrum::cluster_tol(l.norm());
  for (const EigenCluster& c : cluster_spectrum(spec, tol)) {
    if (c.multiplicity == 1) continue;
    CMat shifted = l.cast<Complex>() - c.value * CMat::Identity(m, m);
    if (rank(shifted) != m - c.multiplicity) return false;
  }
  return true;
}

} // namespace

LaplacianAnalysis analyze_laplacian(const WeightedDigraph& g) {
  LaplacianAnalysis a;
  a.laplacian = laplacian(g);
  const int m = g.order();
  a.spectrum = eig(a.laplacian).spectrum;
  const double ctol = Spectrum::cluster_tol(a.laplacian.norm());
  a.zero_multiplicity = 0;
  for (const Complex& v : a.spectrum.values)
    if (std::abs(v) <= ctol) ++a.zero_multiplicity;
  a.has_spanning_tree = has_spanning_tree(g);
  a.diagonalizable = is_diagonalizable(a.laplacian, a.spectrum);
  if (a.zero_multiplicity == 1) {
    // Left zero vector: null space of L^T, normalized against the all-ones
    // right eigenvector.
    Eigen::JacobiSVD<Mat> svd(Mat(a.laplacian.transpose()),
                              Eigen::ComputeFullU | Eigen::ComputeFullV);
    Vec nu = svd.matrixV().col(m - 1);
    double dot = nu.sum();
    if (std::abs(dot) < 1e-12 * nu.norm())
      throw NumericalError("laplacian: left zero vector orthogonal to ones");
    a.left_zero_vector = Vec(nu / dot);
  }
  return a;
}

WeightedDigraph perturb_to_diagonalizable(const WeightedDigraph& g, double eps,
                                          std::uint64_t seed) {
  if (eps <= 0.0) throw DomainError("perturb_to_diagonalizable: eps must be > 0");
  {
    LaplacianAnalysis a = analyze_laplacian(g);
    if (a.diagonalizable) return g;
  }
  std::mt19937_64 rng(seed);
  const Mat l0 = laplacian(g);
  const int max_attempts = 64;
  double scale = 0.25; // relative jitter, shrunk until the Frobenius gap fits
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    Mat w = g.w;
    std::uniform_real_distribution<double> jitter(-scale, scale);
    for (Eigen::Index i = 0; i < w.rows(); ++i)
      for (Eigen::Index j = 0; j < w.cols(); ++j)
        if (w(i, j) > 0.0) w(i, j) *= 1.0 + jitter(rng);
    WeightedDigraph cand{w};
    double gap = (laplacian(cand) - l0).squaredNorm();
    if (gap >= eps) {
      scale *= 0.5;
      continue;
    }
    LaplacianAnalysis a = analyze_laplacian(cand);
    if (a.diagonalizable) return cand;
    scale = std::min(scale * 1.5, 0.25);
  }
  std::ostringstream os;
  os << "perturb_to_diagonalizable: no diagonalizable perturbation within eps="
     << eps << " after " << max_attempts << " attempts";
  throw NumericalError(os.str());
}

} // namespace swarmstab
