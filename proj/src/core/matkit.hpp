#pragma once

// Dense matrix kernels shared by the whole library: Kronecker products,
// eigensolves, SVD rank, matrix exponential, polynomial roots and linear
// solves, all with explicit tolerances.

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace swarmstab {

using Mat = Eigen::MatrixXd;
using CMat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;
using Complex = std::complex<double>;

/// Thrown when a numerical kernel cannot deliver its contract
/// (singular solve, eigensolver non-convergence, expm overflow).
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown on invalid domain inputs (non-square matrix, zero polynomial, ...).
class DomainError : public std::invalid_argument {
public:
  explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

// Default tolerances. All overridable per call where it matters.
namespace tol {
inline constexpr double k_cluster = 1e-6;   // scaled by (1 + ||a||)
inline constexpr double k_rank = 1e-10;     // scaled by max(rows, cols)
inline constexpr double k_poly_trim = 1e-9; // scaled by max |coefficient|
} // namespace tol

/// Eigenvalues with algebraic multiplicities summing to the matrix order.
struct Spectrum {
  std::vector<Complex> values; // with multiplicity, unclustered

  /// Cluster tolerance for a matrix of spectral norm estimate `scale`.
  static double cluster_tol(double scale) { return tol::k_cluster * (1.0 + scale); }
};

/// One eigenvalue cluster: representative value + algebraic multiplicity.
struct EigenCluster {
  Complex value;
  int multiplicity;
};

/// Greedy clustering of a spectrum: values within `tol` of a cluster
/// representative are merged; the representative is the cluster mean.
std::vector<EigenCluster> cluster_spectrum(const Spectrum& s, double tol);

/// Multiset distance: max over a minimal matching of |a_i - b_sigma(i)|.
/// Throws DomainError if sizes differ.
double spectrum_mismatch(const Spectrum& a, const Spectrum& b);

/// Complex polynomial in ascending-degree coefficients, trailing
/// (high-order) coefficients below the trim tolerance removed.
struct Polynomial {
  std::vector<Complex> coeffs; // coeffs[k] multiplies s^k

  /// Degree after trimming; -1 for the identically-zero polynomial.
  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  bool is_zero() const { return coeffs.empty(); }

  /// Trim coefficients with |c| <= k_poly_trim * max|c|. A polynomial whose
  /// every coefficient is below `abs_floor` becomes identically zero.
  static Polynomial from_coeffs(std::vector<Complex> c, double abs_floor = 0.0);

  Complex eval(Complex s) const;
};

struct EigenDecomposition {
  Spectrum spectrum;
  CMat right_vectors; // column k pairs with spectrum.values[k]
};

bool is_finite(const Mat& a);
bool is_finite(const CMat& a);

/// Kronecker product; block (i,j) of the result equals a(i,j) * b.
Mat kron(const Mat& a, const Mat& b);
CMat kron(const CMat& a, const CMat& b);

/// Full eigendecomposition of a square matrix (all n values with
/// multiplicity). Throws NumericalError on non-convergence.
EigenDecomposition eig(const CMat& a);
EigenDecomposition eig(const Mat& a);

/// Numerical rank: number of singular values > tol * sigma_max.
/// Negative `tol` selects the default k_rank * max(rows, cols).
int rank(const Mat& a, double tol = -1.0);
int rank(const CMat& a, double tol = -1.0);

/// Matrix exponential by scaling-and-squaring with a Pade core.
Mat expm(const Mat& a);
CMat expm(const CMat& a);

/// Roots of a trimmed polynomial via companion-matrix eigenvalues.
/// Throws DomainError on the identically-zero polynomial.
Spectrum poly_roots(const Polynomial& p);

/// Solve a x = b for square nonsingular a. Throws NumericalError with a
/// condition estimate when a is singular to working tolerance.
Mat solve(const Mat& a, const Mat& b);
CMat solve(const CMat& a, const CMat& b);

/// Reciprocal condition estimate from the SVD (sigma_min / sigma_max).
double rcond(const Mat& a);

} // namespace swarmstab
