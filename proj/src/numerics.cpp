#include "isacsim/numerics.hpp"

#include <Eigen/Cholesky>
#include <Eigen/SVD>
#include <cmath>
#include <limits>
#include <sstream>

namespace isacsim {
namespace numerics {

namespace {

std::string shape_of(const CMat& a) {
  std::ostringstream os;
  os << a.rows() << "x" << a.cols();
  return os.str();
}

bool all_finite(const CMat& a) {
  return a.allFinite();
}

}  // namespace

CMat matmul(const CMat& a, const CMat& b) {
  if (a.cols() != b.rows()) {
    throw ShapeError("matmul: inner dimensions differ (" + shape_of(a) +
                     " * " + shape_of(b) + ")");
  }
  return a * b;
}

CMat hermitian(const CMat& a) { return a.adjoint(); }

double frobenius_norm(const CMat& a) { return a.norm(); }

cplx trace_of(const CMat& a) {
  if (a.rows() != a.cols()) {
    throw ShapeError("trace_of: matrix is not square (" + shape_of(a) + ")");
  }
  return a.trace();
}

CMat pseudo_inverse(const CMat& a, double rel_tol) {
  if (a.size() == 0) {
    throw ShapeError("pseudo_inverse: empty matrix");
  }
  if (!all_finite(a)) {
    throw NumericalFailure("pseudo_inverse: non-finite input (" + shape_of(a) +
                           ")");
  }
  Eigen::JacobiSVD<CMat> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) {
    throw NumericalFailure("pseudo_inverse: SVD did not converge on " +
                           shape_of(a));
  }
  if (rel_tol < 0.0) {
    rel_tol = static_cast<double>(std::max(a.rows(), a.cols())) *
              std::numeric_limits<double>::epsilon();
  }
  const auto& sv = svd.singularValues();
  const double cutoff = sv.size() > 0 ? rel_tol * sv(0) : 0.0;
  Eigen::VectorXd inv_sv(sv.size());
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    inv_sv(i) = sv(i) > cutoff ? 1.0 / sv(i) : 0.0;
  }
  return svd.matrixV() * inv_sv.asDiagonal() * svd.matrixU().adjoint();
}

double log_det_capacity(const CMat& a, LogDetStatus* status) {
  if (a.rows() != a.cols()) {
    throw ShapeError("log_det_capacity: matrix is not square (" + shape_of(a) +
                     ")");
  }
  if (!all_finite(a)) {
    throw NumericalFailure("log_det_capacity: non-finite input");
  }
  if (status) status->clamped = false;
  const Eigen::Index n = a.rows();
  CMat m = CMat::Identity(n, n) + 0.5 * (a + a.adjoint());
  // Hermitian by construction; eigenvalues give a stable log-det.
  Eigen::SelfAdjointEigenSolver<CMat> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw NumericalFailure("log_det_capacity: eigendecomposition failed");
  }
  double log2det = 0.0;
  int negatives = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double ev = es.eigenvalues()(i);
    if (ev == 0.0) {
      if (status) status->clamped = true;
      return 0.0;
    }
    if (ev < 0.0) ++negatives;
    log2det += std::log2(std::abs(ev));
  }
  // det(I + sym(a)) <= 0, or a nominally positive det below 1 (negative
  // capacity): both clamp to rate 0.
  if (negatives % 2 == 1 || log2det < 0.0) {
    if (status) status->clamped = true;
    return 0.0;
  }
  return log2det;
}

CMat phase_matrix(const CMat& a, double scale) {
  CMat out(a.rows(), a.cols());
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      const cplx v = a(i, j);
      if (v == cplx(0.0, 0.0)) {
        out(i, j) = cplx(scale, 0.0);  // arg(0) taken as 0
      } else {
        const double ang = std::arg(v);
        out(i, j) = cplx(scale * std::cos(ang), scale * std::sin(ang));
      }
    }
  }
  return out;
}

namespace {

// Cholesky with escalating diagonal jitter; shared by the solve and the
// whitening entry points.
Eigen::LLT<CMat> jittered_llt(const CMat& a) {
  const Eigen::Index n = a.rows();
  Eigen::LLT<CMat> llt(a);
  if (llt.info() == Eigen::Success) return llt;
  const double base =
      1e-12 * std::abs(a.trace()) / static_cast<double>(n > 0 ? n : 1);
  double jitter = base > 0.0 ? base : 1e-300;
  for (int attempt = 0; attempt <= 3; ++attempt) {
    CMat regularized = a + jitter * CMat::Identity(n, n);
    llt.compute(regularized);
    if (llt.info() == Eigen::Success) return llt;
    jitter *= 10.0;
  }
  throw NumericalFailure(
      "cholesky: factorization failed after jitter escalation");
}

}  // namespace

CMat solve_hermitian_psd(const CMat& a, const CMat& b) {
  if (a.rows() != a.cols()) {
    throw ShapeError("solve_hermitian_psd: matrix is not square (" +
                     shape_of(a) + ")");
  }
  if (a.rows() != b.rows()) {
    throw ShapeError("solve_hermitian_psd: rhs rows mismatch (" + shape_of(a) +
                     " vs " + shape_of(b) + ")");
  }
  if (!all_finite(a) || !all_finite(b)) {
    throw NumericalFailure("solve_hermitian_psd: non-finite input");
  }
  return jittered_llt(a).solve(b);
}

CMat cholesky_psd(const CMat& a) {
  if (a.rows() != a.cols()) {
    throw ShapeError("cholesky_psd: matrix is not square (" + shape_of(a) +
                     ")");
  }
  if (!all_finite(a)) {
    throw NumericalFailure("cholesky_psd: non-finite input");
  }
  return jittered_llt(a).matrixL();
}

CMat whitened_capacity(const CMat& signal, const CMat& cov, double rel_tol) {
  if (signal.rows() != signal.cols() || cov.rows() != cov.cols()) {
    throw ShapeError("whitened_capacity: matrices are not square (" +
                     shape_of(signal) + ", " + shape_of(cov) + ")");
  }
  if (signal.rows() != cov.rows()) {
    throw ShapeError("whitened_capacity: size mismatch (" + shape_of(signal) +
                     " vs " + shape_of(cov) + ")");
  }
  if (!all_finite(signal) || !all_finite(cov)) {
    throw NumericalFailure("whitened_capacity: non-finite input");
  }
  if (!(rel_tol >= 0.0)) {
    throw NumericalFailure("whitened_capacity: rel_tol must be >= 0");
  }
  const Eigen::Index n = cov.rows();
  const CMat cov_sym = 0.5 * (cov + cov.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> es(cov_sym);
  if (es.info() != Eigen::Success) {
    throw NumericalFailure("whitened_capacity: eigendecomposition failed");
  }
  const double lambda_max = es.eigenvalues()(n - 1);
  if (!(lambda_max > 0.0)) {
    throw NumericalFailure(
        "whitened_capacity: covariance has no positive direction");
  }
  const double cutoff = rel_tol * lambda_max;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (es.eigenvalues()(i) > cutoff) ++rank;
  }
  CMat basis(n, rank);
  Eigen::Index col = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double ev = es.eigenvalues()(i);
    if (ev > cutoff) {
      basis.col(col++) = es.eigenvectors().col(i) / std::sqrt(ev);
    }
  }
  const CMat result = basis.adjoint() * signal * basis;
  return 0.5 * (result + result.adjoint());
}

}  // namespace numerics
}  // namespace isacsim
