#pragma once

// Regularity, finite eigenvalues, impulse-freeness and the standard
// (Weierstrass) decomposition of a matrix pencil (E, F).

#include "matkit.hpp"

namespace swarmstab {

struct MatrixPencil {
  Mat e;
  Mat f;

  int order() const { return static_cast<int>(e.rows()); }
  int rank_e() const;

  static MatrixPencil make(Mat e, Mat f);
};

/// det(sE - F) as a polynomial in s.
struct CharPoly {
  Polynomial p;
  bool regular = false;

  int degree() const { return p.degree(); }
};

/// (Q, P) with Q E P = diag(I, N), Q F P = diag(A1, I); N nilpotent of
/// index h (h = 0 when the fast block is empty).
struct StandardDecomposition {
  Mat q;
  Mat p;
  Mat a1;     // n1 x n1 slow dynamics
  Mat n;      // n2 x n2 nilpotent
  int n1 = 0;
  int n2 = 0;
  int h = 0;
  double rcond_transform = 1.0; // min of rcond(Q^-1), rcond(P)
  bool ill_conditioned = false;
};

/// Coefficients of det(sE - F) by determinant sampling on a circle and
/// inverse-DFT interpolation.
CharPoly char_poly(const MatrixPencil& pc);

/// Roots of char_poly; throws DomainError("pencil not regular") otherwise.
Spectrum finite_eigenvalues(const MatrixPencil& pc);

/// degree(det(sE - F)) == rank(E), i.e. no impulsive modes.
bool is_impulse_free(const MatrixPencil& pc);

StandardDecomposition standard_decomposition(const MatrixPencil& pc);

/// Finite eigenvalues of (E, c F) for c != 0, computed directly; equals
/// c * sigma(E, F) by the scaling law.
Spectrum scaled_pencil_eigenvalues(const MatrixPencil& pc, Complex c);

} // namespace swarmstab
