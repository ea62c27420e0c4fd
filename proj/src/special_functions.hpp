#pragma once

// Elliptic integrals and Jacobi elliptic functions for parameter m in (0,1),
// plus the closure integral that decides which stationary curves close up.

namespace ccdf {

struct JacobiTriple {
  double cn;
  double sn;
  double dn;
};

/// Incomplete elliptic integral of the first kind F(x;m), any real x.
/// Evaluated by adaptive Gauss-Kronrod quadrature on |x| <= pi/2 and extended
/// with F(x + pi; m) = F(x; m) + 2K(m).
double incomplete_F(double x, double m);

/// Complete elliptic integral K(m) = F(pi/2; m), via the arithmetic-geometric mean.
double complete_K(double m);

/// Jacobi amplitude, the inverse of F(.; m), by descending Landen transformation.
double jacobi_am(double u, double m);

JacobiTriple jacobi_cn_sn_dn(double u, double m);

/// f(t) = int_0^{pi/2} cos(t x) / sqrt(cos x) dx.
/// Zero exactly at |t| = (4j - 1)/2, j = 1, 2, ...
double closure_integral_f(double t);

}  // namespace ccdf
