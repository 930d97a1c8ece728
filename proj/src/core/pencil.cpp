#include "pencil.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>
#include <cmath>
#include <numbers>
#include <sstream>

namespace swarmstab {

MatrixPencil MatrixPencil::make(Mat e, Mat f) {
  if (e.rows() != e.cols() || f.rows() != f.cols() || e.rows() != f.rows())
    throw DomainError("pencil: E and F must be square and of equal order");
  if (e.rows() < 1) throw DomainError("pencil: order must be >= 1");
  if (!is_finite(e) || !is_finite(f)) throw DomainError("pencil: non-finite entries");
  return MatrixPencil{std::move(e), std::move(f)};
}

int MatrixPencil::rank_e() const { return rank(e); }

namespace {

// Sampling radius for the determinant interpolation: finite eigenvalues are
// bounded by ~||F|| over the smallest active singular value of E.
double sampling_radius(const Mat& e, const Mat& f) {
  Eigen::JacobiSVD<Mat> svd(e);
  const auto& sv = svd.singularValues();
  double sigma_guard = 1.0;
  if (sv.size() > 0 && sv(0) > 0.0) {
    double tolv = tol::k_rank * static_cast<double>(e.rows()) * sv(0);
    for (Eigen::Index k = sv.size() - 1; k >= 0; --k)
      if (sv(k) > tolv) {
        sigma_guard = sv(k);
        break;
      }
  }
  double r = 2.0 * (f.norm() + 1.0) / std::min(sigma_guard, 1.0);
  return std::clamp(r, 1.0, 1e3);
}

struct DetSample {
  Complex det;
  double hadamard; // row-norm product, the natural determinant scale
};

DetSample det_at(const CMat& e, const CMat& f, Complex s) {
  CMat m = s * e - f;
  DetSample out;
  out.hadamard = 1.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    out.hadamard *= m.row(i).norm() + 1e-300;
  out.det = Eigen::FullPivLU<CMat>(m).determinant();
  return out;
}

CharPoly char_poly_impl(const CMat& e, const CMat& f, double radius) {
  const int n = static_cast<int>(e.rows());
  const int np = n + 1;
  const Complex i_unit(0.0, 1.0);
  std::vector<Complex> dets(static_cast<std::size_t>(np));
  bool any_nonzero = false;
  for (int k = 0; k < np; ++k) {
    Complex s = radius * std::exp(i_unit * (2.0 * std::numbers::pi * k / np));
    DetSample d = det_at(e, f, s);
    dets[static_cast<std::size_t>(k)] = d.det;
    if (std::abs(d.det) > 1e-12 * d.hadamard) any_nonzero = true;
  }
  CharPoly cp;
  cp.regular = any_nonzero;
  if (!any_nonzero) {
    cp.p = Polynomial{};
    return cp;
  }
  // Inverse DFT on the circle: c_j = (1/((n+1) R^j)) sum_k d_k w^{-jk}.
  std::vector<Complex> coeffs(static_cast<std::size_t>(np));
  for (int j = 0; j < np; ++j) {
    Complex acc = 0.0;
    for (int k = 0; k < np; ++k)
      acc += dets[static_cast<std::size_t>(k)] *
             std::exp(i_unit * (-2.0 * std::numbers::pi * j * k / np));
    coeffs[static_cast<std::size_t>(j)] =
        acc / (static_cast<double>(np) * std::pow(radius, j));
  }
  cp.p = Polynomial::from_coeffs(std::move(coeffs));
  if (cp.p.is_zero()) cp.regular = false;
  return cp;
}

} // namespace

CharPoly char_poly(const MatrixPencil& pc) {
  return char_poly_impl(pc.e.cast<Complex>(), pc.f.cast<Complex>(),
                        sampling_radius(pc.e, pc.f));
}

Spectrum finite_eigenvalues(const MatrixPencil& pc) {
  CharPoly cp = char_poly(pc);
  if (!cp.regular) throw DomainError("pencil not regular (singular pencil)");
  return poly_roots(cp.p);
}

bool is_impulse_free(const MatrixPencil& pc) {
  CharPoly cp = char_poly(pc);
  if (!cp.regular) throw DomainError("pencil not regular (singular pencil)");
  return cp.degree() == pc.rank_e();
}

StandardDecomposition standard_decomposition(const MatrixPencil& pc) {
  CharPoly cp = char_poly(pc);
  if (!cp.regular) throw DomainError("pencil not regular (singular pencil)");
  const int n = pc.order();
  const double radius = sampling_radius(pc.e, pc.f);

  // Shift selection: real candidates on the sampling circle, pick the one
  // with the largest scale-normalized |det(alpha E - F)|.
  double alpha = 0.0;
  double best = -1.0;
  for (double c : {0.31, -0.31, 0.72, -0.72, 1.13, -1.13, 1.54, -1.54}) {
    double cand = c * radius;
    DetSample d = det_at(pc.e.cast<Complex>(), pc.f.cast<Complex>(), Complex(cand, 0.0));
    double score = std::abs(d.det) / d.hadamard;
    if (score > best) {
      best = score;
      alpha = cand;
    }
  }
  if (best <= 1e-14)
    throw NumericalError("standard_decomposition: no usable shift found");

  // Shift-invert: slow space = range of M^n, fast space = kernel of M^n,
  // M = (alpha E - F)^-1 E.
  Mat shifted = alpha * pc.e - pc.f;
  Mat m = solve(shifted, pc.e);
  Mat mn = Mat::Identity(n, n);
  for (int k = 0; k < n; ++k) mn = m * mn;
  Eigen::JacobiSVD<Mat> svd(mn, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  double tolv = tol::k_rank * n * (sv.size() && sv(0) > 0 ? sv(0) : 1.0);
  int n1 = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k)
    if (sv(k) > tolv) ++n1;
  const int n2 = n - n1;

  StandardDecomposition d;
  d.n1 = n1;
  d.n2 = n2;
  d.p = Mat(n, n);
  if (n1 > 0) d.p.leftCols(n1) = svd.matrixU().leftCols(n1);
  if (n2 > 0) d.p.rightCols(n2) = svd.matrixV().rightCols(n2);

  Mat c(n, n);
  if (n1 > 0) c.leftCols(n1) = pc.e * d.p.leftCols(n1);
  if (n2 > 0) c.rightCols(n2) = pc.f * d.p.rightCols(n2);
  d.rcond_transform = std::min(rcond(c), rcond(d.p));
  d.ill_conditioned = d.rcond_transform < 1e-10;
  d.q = solve(c, Mat::Identity(n, n));

  Mat qep = d.q * pc.e * d.p;
  Mat qfp = d.q * pc.f * d.p;
  // Absorb the diagonal blocks that must be identity into Q.
  if (n1 > 0) d.q.topRows(n1) = solve(Mat(qep.topLeftCorner(n1, n1)), Mat(d.q.topRows(n1)));
  if (n2 > 0) d.q.bottomRows(n2) = solve(Mat(qfp.bottomRightCorner(n2, n2)), Mat(d.q.bottomRows(n2)));
  qep = d.q * pc.e * d.p;
  qfp = d.q * pc.f * d.p;

  d.a1 = qfp.topLeftCorner(n1, n1);
  d.n = qep.bottomRightCorner(n2, n2);

  Mat target_e = Mat::Zero(n, n);
  target_e.topLeftCorner(n1, n1) = Mat::Identity(n1, n1);
  target_e.bottomRightCorner(n2, n2) = d.n;
  Mat target_f = Mat::Zero(n, n);
  target_f.topLeftCorner(n1, n1) = d.a1;
  target_f.bottomRightCorner(n2, n2) = Mat::Identity(n2, n2);
  double res_e = (qep - target_e).norm();
  double res_f = (qfp - target_f).norm();
  if (res_e > 1e-8 * (pc.e.norm() + 1.0) || res_f > 1e-8 * (pc.f.norm() + 1.0)) {
    std::ostringstream os;
    os << "standard_decomposition: reconstruction residual too large (e="
       << res_e << ", f=" << res_f << ", rcond=" << d.rcond_transform << ")";
    throw NumericalError(os.str());
  }

  if (n2 == 0) {
    d.h = 0;
  } else {
    Mat nk = Mat::Identity(n2, n2);
    d.h = -1;
    for (int k = 1; k <= n2; ++k) {
      nk = d.n * nk;
      if (rank(nk) == 0) {
        d.h = k;
        break;
      }
    }
    if (d.h < 0)
      throw NumericalError("standard_decomposition: fast block not nilpotent");
  }
  return d;
}

Spectrum scaled_pencil_eigenvalues(const MatrixPencil& pc, Complex c) {
  if (std::abs(c) == 0.0)
    throw DomainError("scaled_pencil_eigenvalues: degenerate pencil (E, 0)");
  CMat e = pc.e.cast<Complex>();
  CMat f = c * pc.f.cast<Complex>();
  double radius = std::clamp(2.0 * (f.norm() + 1.0) *
                                 sampling_radius(pc.e, pc.f) /
                                 (2.0 * (pc.f.norm() + 1.0)),
                             1.0, 1e6);
  CharPoly cp = char_poly_impl(e, f, radius);
  if (!cp.regular) throw DomainError("pencil not regular (singular pencil)");
  return poly_roots(cp.p);
}

} // namespace swarmstab
