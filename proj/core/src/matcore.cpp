#include "hprec/matcore.hpp"

#include <cmath>
#include <numbers>

#include "hprec/error.hpp"

namespace hprec {

namespace {

CMatrix hermitian_part(const CMatrix& a) {
  require(a.rows() == a.cols(), ErrorCode::DimensionMismatch, "HPD routine needs a square matrix");
  require(all_finite(a), ErrorCode::NotPositiveDefinite, "matrix has non-finite entries");
  const double scale = a.norm();
  const double asym = (a - a.adjoint()).norm();
  if (scale > 0.0 && asym > kHermitianTolerance * scale) {
    fail(ErrorCode::NotHermitian, "relative asymmetry " + std::to_string(asym / scale));
  }
  return (a + a.adjoint()) * 0.5;
}

}  // namespace

HpdFactorization::HpdFactorization(const CMatrix& a) : llt_(hermitian_part(a)) {
  if (llt_.info() != Eigen::Success) fail(ErrorCode::NotPositiveDefinite, "Cholesky factorization failed");
  const auto diag = llt_.matrixLLT().diagonal().real();
  if (!(diag.array() > 0.0).all()) fail(ErrorCode::NotPositiveDefinite, "non-positive pivot");
}

double HpdFactorization::log2det() const {
  const auto diag = llt_.matrixLLT().diagonal().real();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < diag.size(); ++i) acc += std::log(diag[i]);
  return 2.0 * acc / std::numbers::ln2;
}

CMatrix HpdFactorization::solve(const CMatrix& b) const {
  require(llt_.rows() == b.rows(), ErrorCode::DimensionMismatch, "solve_hpd: row count of B must match A");
  return llt_.solve(b);
}

double logdet_hpd(const CMatrix& a) { return HpdFactorization(a).log2det(); }

CMatrix solve_hpd(const CMatrix& a, const CMatrix& b) {
  require(a.rows() == b.rows(), ErrorCode::DimensionMismatch, "solve_hpd: row count of B must match A");
  return HpdFactorization(a).solve(b);
}

Svd svd_full(const CMatrix& a) {
  if (!all_finite(a)) fail(ErrorCode::ConvergenceFailure, "svd_full: non-finite input");
  Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  CMatrix u = svd.matrixU();
  CMatrix v = svd.matrixV();
  const RVector s = svd.singularValues();
  if (!all_finite(u) || !all_finite(v) || !s.allFinite()) {
    fail(ErrorCode::ConvergenceFailure, "svd_full: non-finite factors");
  }

  // Pin the phase of each right-singular vector; the matching left vector
  // takes the same phase so that U diag(s) V^H is unchanged.
  constexpr double kNonzero = 1e-12;
  for (Eigen::Index j = 0; j < v.cols(); ++j) {
    for (Eigen::Index i = 0; i < v.rows(); ++i) {
      const double mag = std::abs(v(i, j));
      if (mag > kNonzero) {
        const cd phase = std::conj(v(i, j)) / mag;
        v.col(j) *= phase;
        if (j < s.size()) u.col(j) *= phase;
        break;
      }
    }
  }
  return Svd{std::move(u), s, v.adjoint()};
}

double frobenius_sq(const CMatrix& a) { return a.squaredNorm(); }

double real_inner(const CMatrix& d, const CMatrix& x) {
  return (d.conjugate().cwiseProduct(x)).sum().real();
}

bool all_finite(const CMatrix& a) { return a.allFinite(); }

CMatrix identity(Eigen::Index n) { return CMatrix::Identity(n, n); }

}  // namespace hprec
