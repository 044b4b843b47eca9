#pragma once

#include <Eigen/Dense>
#include <complex>

#include "isacsim/errors.hpp"

namespace isacsim {

using cplx = std::complex<double>;
/// Dense complex matrix, the shared currency of every module.
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

namespace numerics {

/// Shape-checked product; ShapeError instead of an Eigen assert.
CMat matmul(const CMat& a, const CMat& b);

/// Conjugate transpose.
CMat hermitian(const CMat& a);

double frobenius_norm(const CMat& a);

/// Trace of a square matrix; ShapeError otherwise.
cplx trace_of(const CMat& a);

/// Moore-Penrose pseudo-inverse via SVD. Singular values below
/// rel_tol * sigma_max are treated as zero; rel_tol < 0 selects the
/// default max(rows, cols) * machine-eps. Throws NumericalFailure on
/// SVD non-convergence or non-finite input.
CMat pseudo_inverse(const CMat& a, double rel_tol = -1.0);

struct LogDetStatus {
  bool clamped = false;  // det(I + sym(a)) was not strictly positive
};

/// log2 det(I + a) where a is a (possibly slightly asymmetric) SINR-like
/// matrix; a is symmetrized to (a + a^H)/2 first. A non-positive
/// determinant is clamped to rate 0 and reported through status.
double log_det_capacity(const CMat& a, LogDetStatus* status = nullptr);

/// Entrywise scale * exp(j * arg(a)). arg(0) is taken as 0, so zero
/// entries map to scale itself (constant-modulus lattices stay total).
CMat phase_matrix(const CMat& a, double scale);

/// Solves a x = b for Hermitian positive semidefinite a via Cholesky.
/// A failed factorization is retried with jitter 1e-12 * trace(a)/n on
/// the diagonal, escalating that jitter by one decade up to 3 times
/// before NumericalFailure.
CMat solve_hermitian_psd(const CMat& a, const CMat& b);

/// Lower Cholesky factor of a Hermitian PSD matrix with the same jitter
/// escalation as solve_hermitian_psd.
CMat cholesky_psd(const CMat& a);

/// Noise-whitened capacity matrix: eigenvalue-equivalent to
/// signal * cov^{-1} restricted to cov's non-singular subspace. cov is
/// Hermitian PSD; eigendirections at or below rel_tol * lambda_max are
/// exact nulls of the physical model (the signal shares them), so they
/// are dropped and the result is r x r with r = rank(cov). Cholesky
/// whitening is unusable here: on rank-deficient covariances it factors
/// floating-point noise and the solve amplifies it chaotically.
CMat whitened_capacity(const CMat& signal, const CMat& cov,
                       double rel_tol = 1e-12);

}  // namespace numerics
}  // namespace isacsim
