#include "matkit.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <sstream>

namespace swarmstab {

bool is_finite(const Mat& a) { return a.allFinite(); }
bool is_finite(const CMat& a) { return a.allFinite(); }

std::vector<EigenCluster> cluster_spectrum(const Spectrum& s, double tol) {
  std::vector<EigenCluster> clusters;
  std::vector<Complex> sums;
  for (const Complex& v : s.values) {
    bool merged = false;
    for (std::size_t k = 0; k < clusters.size(); ++k) {
      if (std::abs(v - clusters[k].value) <= tol) {
        sums[k] += v;
        clusters[k].multiplicity += 1;
        clusters[k].value = sums[k] / static_cast<double>(clusters[k].multiplicity);
        merged = true;
        break;
      }
    }
    if (!merged) {
      clusters.push_back({v, 1});
      sums.push_back(v);
    }
  }
  return clusters;
}

double spectrum_mismatch(const Spectrum& a, const Spectrum& b) {
  if (a.values.size() != b.values.size())
    throw DomainError("spectrum_mismatch: size mismatch");
  // Greedy nearest-neighbor matching; adequate for the small orders here.
  std::vector<Complex> rem(b.values);
  double worst = 0.0;
  for (const Complex& v : a.values) {
    std::size_t best = 0;
    double bestd = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < rem.size(); ++k) {
      double d = std::abs(v - rem[k]);
      if (d < bestd) {
        bestd = d;
        best = k;
      }
    }
    worst = std::max(worst, bestd);
    rem.erase(rem.begin() + static_cast<std::ptrdiff_t>(best));
  }
  return worst;
}

Polynomial Polynomial::from_coeffs(std::vector<Complex> c, double abs_floor) {
  double maxmag = 0.0;
  for (const Complex& x : c) maxmag = std::max(maxmag, std::abs(x));
  double trim = std::max(tol::k_poly_trim * maxmag, abs_floor);
  while (!c.empty() && std::abs(c.back()) <= trim) c.pop_back();
  return Polynomial{std::move(c)};
}

Complex Polynomial::eval(Complex s) const {
  Complex acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * s + *it;
  return acc;
}

Mat kron(const Mat& a, const Mat& b) {
  Mat r(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      r.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return r;
}

CMat kron(const CMat& a, const CMat& b) {
  CMat r(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      r.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return r;
}

EigenDecomposition eig(const CMat& a) {
  if (a.rows() != a.cols()) throw DomainError("eig: matrix must be square");
  if (!is_finite(a)) throw DomainError("eig: non-finite entries");
  Eigen::ComplexEigenSolver<CMat> es(a, /*computeEigenvectors=*/true);
  if (es.info() != Eigen::Success)
    throw NumericalError("eig: eigensolver did not converge");
  EigenDecomposition d;
  d.spectrum.values.assign(es.eigenvalues().data(),
                           es.eigenvalues().data() + es.eigenvalues().size());
  d.right_vectors = es.eigenvectors();
  return d;
}

EigenDecomposition eig(const Mat& a) { return eig(CMat(a.cast<Complex>())); }

template <class M> static int rank_impl(const M& a, double tol) {
  Eigen::JacobiSVD<M> svd(a);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0) return 0;
  double smax = sv(0);
  if (smax == 0.0) return 0;
  if (tol < 0.0)
    tol = tol::k_rank * static_cast<double>(std::max(a.rows(), a.cols()));
  int r = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k)
    if (sv(k) > tol * smax) ++r;
  return r;
}

int rank(const Mat& a, double tol) { return rank_impl(a, tol); }
int rank(const CMat& a, double tol) { return rank_impl(a, tol); }

// Scaling-and-squaring with the degree-13 Pade approximant (Higham 2005).
template <class M> static M expm_impl(const M& a) {
  if (a.rows() != a.cols()) throw DomainError("expm: matrix must be square");
  if (!a.allFinite()) throw DomainError("expm: non-finite entries");
  const Eigen::Index n = a.rows();
  const M id = M::Identity(n, n);
  double norm = a.template lpNorm<1>();
  if (!std::isfinite(norm) || norm > 1e8)
    throw NumericalError("expm: norm too large, result would overflow");
  int squarings = 0;
  const double theta13 = 5.371920351148152;
  M as = a;
  if (norm > theta13) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / theta13)));
    as = a / std::pow(2.0, squarings);
  }
  static const double b[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                             1187353796428800.0,  129060195264000.0,   10559470521600.0,
                             670442572800.0,      33522128640.0,       1323241920.0,
                             40840800.0,          960960.0,            16380.0,
                             182.0,               1.0};
  const M a2 = as * as;
  const M a4 = a2 * a2;
  const M a6 = a2 * a4;
  M u = as * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 +
              b[3] * a2 + b[1] * id);
  M v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 +
        b[2] * a2 + b[0] * id;
  Eigen::FullPivLU<M> lu(v - u);
  if (!lu.isInvertible())
    throw NumericalError("expm: Pade denominator singular");
  M r = lu.solve(v + u);
  for (int k = 0; k < squarings; ++k) r = r * r;
  return r;
}

Mat expm(const Mat& a) { return expm_impl(a); }
CMat expm(const CMat& a) { return expm_impl(a); }

Spectrum poly_roots(const Polynomial& p) {
  if (p.is_zero())
    throw DomainError("poly_roots: identically-zero polynomial (not regular)");
  const int deg = p.degree();
  Spectrum s;
  if (deg == 0) return s;
  CMat companion = CMat::Zero(deg, deg);
  const Complex lead = p.coeffs.back();
  for (int k = 0; k < deg; ++k) companion(k, deg - 1) = -p.coeffs[static_cast<std::size_t>(k)] / lead;
  for (int k = 1; k < deg; ++k) companion(k, k - 1) = 1.0;
  return eig(companion).spectrum;
}

double rcond(const Mat& a) {
  Eigen::JacobiSVD<Mat> svd(a);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0.0;
  return sv(sv.size() - 1) / sv(0);
}

template <class M> static M solve_impl(const M& a, const M& b) {
  if (a.rows() != a.cols()) throw DomainError("solve: matrix must be square");
  if (a.rows() != b.rows()) throw DomainError("solve: dimension mismatch");
  Eigen::JacobiSVD<M> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  double smax = sv.size() ? sv(0) : 0.0;
  double smin = sv.size() ? sv(sv.size() - 1) : 0.0;
  double tolv = tol::k_rank * static_cast<double>(a.rows()) * smax;
  if (smax == 0.0 || smin <= tolv) {
    std::ostringstream os;
    os << "solve: matrix singular to tolerance (rcond="
       << (smax > 0 ? smin / smax : 0.0) << ")";
    throw NumericalError(os.str());
  }
  return svd.solve(b);
}

Mat solve(const Mat& a, const Mat& b) { return solve_impl(a, b); }
CMat solve(const CMat& a, const CMat& b) { return solve_impl(a, b); }

} // namespace swarmstab
