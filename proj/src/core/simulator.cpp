#include "simulator.hpp"

#include <Eigen/LU>
#include <cmath>
#include <sstream>

namespace swarmstab {

NetworkSystem NetworkSystem::assemble(const MatrixPencil& pc, const WeightedDigraph& g) {
  NetworkSystem sys{pc, g, analyze_laplacian(g), standard_decomposition(pc)};
  sys.m = g.order();
  sys.n = pc.order();
  return sys;
}

double dispersion_of(const Mat& x) {
  double d = 0.0;
  for (Eigen::Index i = 0; i < x.cols(); ++i)
    for (Eigen::Index j = i + 1; j < x.cols(); ++j)
      d = std::max(d, (x.col(i) - x.col(j)).norm());
  return d;
}

namespace {

/// Projector onto the generalized zero eigenspace of L (kernel of L^m along
/// its range), applied on the agent index.
Mat zero_mode_projector(const Mat& l) {
  const int m = static_cast<int>(l.rows());
  Mat lm = Mat::Identity(m, m);
  for (int k = 0; k < m; ++k) lm = l * lm;
  Eigen::JacobiSVD<Mat> svd(lm, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  double tolv = tol::k_rank * m * (sv.size() && sv(0) > 0 ? sv(0) : 1.0);
  int r = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k)
    if (sv(k) > tolv) ++r;
  const int z = m - r; // zero-eigenspace dimension
  if (z == 0) return Mat::Zero(m, m);
  Mat basis(m, m);
  basis.leftCols(z) = svd.matrixV().rightCols(z); // kernel of L^m
  basis.rightCols(r) = svd.matrixU().leftCols(r); // range of L^m
  Mat inv = solve(basis, Mat::Identity(m, m));
  return basis.leftCols(z) * inv.topRows(z);
}

ImpulseReport build_impulse_report(const NetworkSystem& sys, const Mat& discarded_fast,
                                   double scale) {
  ImpulseReport rep;
  const int n2 = sys.decomp.n2;
  const int h = sys.decomp.h;
  if (n2 == 0) return rep;
  const double record_tol = 1e-12 * (1.0 + scale);
  if (discarded_fast.norm() <= record_tol) return rep;

  // Modal split of the discarded mass over Laplacian modes.
  EigenDecomposition led = eig(sys.lap.laplacian);
  const CMat& v = led.right_vectors;
  Eigen::JacobiSVD<CMat> svd(v);
  double rc = svd.singularValues()(v.cols() - 1) / svd.singularValues()(0);
  const double ztol = Spectrum::cluster_tol(sys.lap.laplacian.norm());
  const int max_order = std::max(h - 1, 0);
  if (rc < 1e-10) {
    rep.modal_basis_ill_conditioned = true;
    Mat nk = Mat::Identity(n2, n2);
    for (int k = 0; k <= max_order; ++k) {
      double mag = (nk * discarded_fast).norm();
      if (mag > record_tol) rep.entries.push_back({-1, k, mag});
      nk = sys.decomp.n * nk;
    }
    return rep;
  }
  // D = Y V^T: column i of Y carries mode i's fast component.
  CMat y = solve(CMat(v.transpose()), CMat(discarded_fast.cast<Complex>().transpose()))
               .transpose();
  for (int i = 0; i < sys.m; ++i) {
    if (std::abs(led.spectrum.values[static_cast<std::size_t>(i)]) <= ztol) continue;
    CMat nk = CMat::Identity(n2, n2);
    for (int k = 0; k <= max_order; ++k) {
      double mag = (nk * y.col(i)).norm();
      if (mag > record_tol) rep.entries.push_back({i, k, mag});
      nk = sys.decomp.n.cast<Complex>() * nk;
    }
  }
  return rep;
}

} // namespace

ProjectionResult consistent_projection(const NetworkSystem& sys, const Mat& x0,
                                       ZeroModeConvention conv) {
  if (x0.rows() != sys.n || x0.cols() != sys.m) {
    std::ostringstream os;
    os << "consistent_projection: X0 must be " << sys.n << "x" << sys.m << ", got "
       << x0.rows() << "x" << x0.cols();
    throw DomainError(os.str());
  }
  const int n2 = sys.decomp.n2;
  Mat xt = solve(sys.decomp.p, x0); // transformed coordinates, n x m
  ProjectionResult out;
  if (n2 == 0) {
    out.x0_plus = x0;
    return out;
  }
  Mat fast = xt.bottomRows(n2);
  Mat p0 = zero_mode_projector(sys.lap.laplacian);
  Mat fast_zero_mode = fast * p0.transpose();
  Mat discarded = fast - fast_zero_mode;
  out.report = build_impulse_report(sys, discarded, x0.norm());
  xt.bottomRows(n2) =
      (conv == ZeroModeConvention::Preserve) ? fast_zero_mode : Mat(Mat::Zero(n2, sys.m));
  out.x0_plus = sys.decomp.p * xt;
  return out;
}

Trajectory simulate(const NetworkSystem& sys, const Mat& x0,
                    const std::vector<double>& t_grid, ZeroModeConvention conv) {
  for (std::size_t k = 0; k < t_grid.size(); ++k) {
    if (t_grid[k] < 0.0 || (k > 0 && t_grid[k] <= t_grid[k - 1]))
      throw DomainError("simulate: t_grid must be ascending with t >= 0");
  }
  ProjectionResult proj = consistent_projection(sys, x0, conv);
  const int n1 = sys.decomp.n1;
  const int n2 = sys.decomp.n2;
  Mat xt0 = solve(sys.decomp.p, proj.x0_plus);
  Mat slow0 = xt0.topRows(n1);   // n1 x m
  Mat fast_const = xt0.bottomRows(n2);

  Mat op = kron(sys.lap.laplacian, sys.decomp.a1); // acts on agent-major stacks
  Eigen::Map<const Vec> s0(slow0.data(), n1 * sys.m);

  Trajectory traj;
  traj.impulse_report = proj.report;
  traj.times = t_grid;
  traj.states.reserve(t_grid.size());
  traj.dispersion.reserve(t_grid.size());
  for (double t : t_grid) {
    Vec st = (n1 > 0) ? Vec(expm(Mat(-op * t)) * s0) : Vec(Vec::Zero(0));
    Mat xt(sys.n, sys.m);
    if (n1 > 0)
      xt.topRows(n1) = Eigen::Map<const Mat>(st.data(), n1, sys.m);
    if (n2 > 0) xt.bottomRows(n2) = fast_const;
    Mat x = sys.decomp.p * xt;
    traj.dispersion.push_back(dispersion_of(x));
    traj.states.push_back(std::move(x));
  }
  return traj;
}

Vec predicted_consensus_value(const NetworkSystem& sys, const Mat& x0) {
  if (!sys.lap.left_zero_vector)
    throw DomainError("predicted_consensus_value: Laplacian zero eigenvalue is "
                      "not simple (no consensus verdict)");
  return x0 * (*sys.lap.left_zero_vector);
}

Trajectory reference_integrate(const NetworkSystem& sys, const Mat& x0_plus,
                               const std::vector<double>& t_grid) {
  if (sys.decomp.n2 > 0 && sys.decomp.h > 1)
    throw DomainError("reference_integrate: pencil must be impulse free");
  const int dim = sys.n * sys.m;
  const int n2 = sys.decomp.n2;
  Mat eb = kron(Mat::Identity(sys.m, sys.m), sys.pencil.e);
  Mat fb = kron(sys.lap.laplacian, sys.pencil.f);
  Eigen::Map<const Vec> x0v(x0_plus.data(), dim);

  // When E is singular the stacked pencil is singular in the Laplacian zero
  // mode (det(sE) = 0): the fast coordinates of X*nu are free. Pin them to
  // stay constant by reading them through B (nu^T (x) I), B the fast rows
  // of P^-1.
  Mat pin = Mat::Zero(0, dim);
  if (n2 > 0) {
    if (!sys.lap.left_zero_vector)
      throw DomainError("reference_integrate: singular E with non-simple "
                        "Laplacian zero eigenvalue is not supported");
    Mat pinv = solve(sys.decomp.p, Mat::Identity(sys.n, sys.n));
    Mat b = pinv.bottomRows(n2);
    Mat nu_row = sys.lap.left_zero_vector->transpose();
    pin = kron(nu_row, b); // n2 x dim
  }

  auto run = [&](double dt_target) {
    std::vector<Vec> samples;
    Vec x = x0v;
    double t = 0.0;
    for (double tk : t_grid) {
      double span = tk - t;
      if (span > 0.0) {
        int steps = std::max(1, static_cast<int>(std::ceil(span / dt_target)));
        double dt = span / steps;
        Mat lhs = eb + 0.5 * dt * fb;
        Eigen::CompleteOrthogonalDecomposition<Mat> cod(lhs);
        Mat null_basis;
        int nullity = dim - static_cast<int>(cod.rank());
        if (nullity > 0) {
          // Kernel of lhs from the tail of its column permutation space.
          Eigen::JacobiSVD<Mat> svd(lhs, Eigen::ComputeFullV);
          null_basis = svd.matrixV().rightCols(nullity);
          if (pin.rows() != nullity)
            throw NumericalError("reference_integrate: unexpected iteration-"
                                 "matrix nullity");
        }
        double scale = lhs.norm() + fb.norm();
        for (int s = 0; s < steps; ++s) {
          Vec rhs = -dt * (fb * x);
          Vec delta = cod.solve(rhs);
          if ((lhs * delta - rhs).norm() > 1e-8 * (scale * (x.norm() + 1.0)))
            throw NumericalError("reference_integrate: inconsistent step "
                                 "(singular iteration matrix)");
          if (nullity > 0) {
            // Remove the free-direction pollution: keep pin * delta = 0.
            Mat g = pin * null_basis; // n2 x nullity, square here
            Vec c = solve(g, Mat(pin * delta)).col(0);
            delta -= null_basis * c;
          }
          x += delta;
        }
        t = tk;
      }
      samples.push_back(x);
    }
    return samples;
  };

  double horizon = t_grid.empty() ? 1.0 : std::max(t_grid.back(), 1e-6);
  double dt = horizon / 64.0;
  std::vector<Vec> prev = run(dt);
  const int max_refinements = 16;
  for (int r = 0; r < max_refinements; ++r) {
    dt *= 0.5;
    std::vector<Vec> cur = run(dt);
    double diff = 0.0;
    for (std::size_t k = 0; k < cur.size(); ++k)
      diff = std::max(diff, (cur[k] - prev[k]).norm());
    prev = std::move(cur);
    if (diff <= 1e-7) {
      Trajectory traj;
      traj.times = t_grid;
      for (std::size_t k = 0; k < prev.size(); ++k) {
        Mat x = Eigen::Map<const Mat>(prev[k].data(), sys.n, sys.m);
        traj.dispersion.push_back(dispersion_of(x));
        traj.states.push_back(std::move(x));
      }
      return traj;
    }
  }
  throw NumericalError("reference_integrate: no convergence after refinement cap");
}

const char* to_string(EmpiricalClass c) {
  switch (c) {
    case EmpiricalClass::ConsensusLike: return "consensus-like";
    case EmpiricalClass::CriticallyStableLike: return "critically-stable-like";
    case EmpiricalClass::UnstableLike: return "unstable-like";
  }
  return "?";
}

EmpiricalClass empirical_classify(const Trajectory& traj) {
  if (traj.dispersion.empty()) throw DomainError("empirical_classify: empty trajectory");
  const double d0 = traj.dispersion.front();
  if (d0 <= 1e-12) return EmpiricalClass::ConsensusLike;
  const double dfinal = traj.dispersion.back();
  if (dfinal <= 1e-3 * d0) return EmpiricalClass::ConsensusLike;
  double dmax = 0.0;
  for (double d : traj.dispersion) dmax = std::max(dmax, d);

  // Trend test: compare the peak of the last quarter against the first.
  std::size_t q = std::max<std::size_t>(traj.dispersion.size() / 4, 1);
  double head = 0.0, tail = 0.0;
  for (std::size_t k = 0; k < q; ++k) head = std::max(head, traj.dispersion[k]);
  for (std::size_t k = traj.dispersion.size() - q; k < traj.dispersion.size(); ++k)
    tail = std::max(tail, traj.dispersion[k]);
  if (dmax > 10.0 * d0 || tail > 2.5 * head) return EmpiricalClass::UnstableLike;
  return EmpiricalClass::CriticallyStableLike;
}

std::vector<double> uniform_grid(double t_end, int samples) {
  if (t_end <= 0.0 || samples < 2) throw DomainError("uniform_grid: need t_end > 0, samples >= 2");
  std::vector<double> g(static_cast<std::size_t>(samples));
  for (int k = 0; k < samples; ++k)
    g[static_cast<std::size_t>(k)] = t_end * k / (samples - 1);
  return g;
}

} // namespace swarmstab
