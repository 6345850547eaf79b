#pragma once

#include <complex>
#include <cstddef>

#include <Eigen/Dense>

namespace hprec {

using cd = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

/// Result of a full singular value decomposition A = U * diag(s) * Vh.
///
/// `u` is N x N, `vh` is M x M (the adjoint of V, so row j of `vh` is the
/// conjugate of the j-th right-singular vector), `s` has min(N, M) entries in
/// descending order. Phases are pinned: the first nonzero component of every
/// right-singular vector is real and positive.
struct Svd {
  CMatrix u;
  RVector s;
  CMatrix vh;

  /// Column j of V (0-based), i.e. the j-th right-singular vector.
  CMatrix right_vectors(Eigen::Index count) const { return vh.topRows(count).adjoint(); }
};

/// Relative Hermitian asymmetry tolerated by the HPD routines.
inline constexpr double kHermitianTolerance = 1e-10;

/// Cholesky factorization of a Hermitian positive definite matrix, for
/// callers that need both the determinant and solves.
class HpdFactorization {
 public:
  /// Symmetrizes A and factors it. Throws NotHermitian / NotPositiveDefinite.
  explicit HpdFactorization(const CMatrix& a);

  double log2det() const;
  CMatrix solve(const CMatrix& b) const;

 private:
  Eigen::LLT<CMatrix> llt_;
};

/// log2 |A| for Hermitian positive definite A, via Cholesky.
///
/// A is symmetrized as (A + A^H) / 2 before factorization. Throws
/// NotHermitian when ||A - A^H||_F / ||A||_F exceeds kHermitianTolerance and
/// NotPositiveDefinite when the factorization fails.
double logdet_hpd(const CMatrix& a);

/// Solves A X = B for Hermitian positive definite A.
CMatrix solve_hpd(const CMatrix& a, const CMatrix& b);

/// Full SVD with orthonormal completion of both singular-vector bases.
Svd svd_full(const CMatrix& a);

double frobenius_sq(const CMatrix& a);

/// Re <D, X> = Re tr(D^H X); the real inner product on complex matrices.
double real_inner(const CMatrix& d, const CMatrix& x);

bool all_finite(const CMatrix& a);

CMatrix identity(Eigen::Index n);

}  // namespace hprec
