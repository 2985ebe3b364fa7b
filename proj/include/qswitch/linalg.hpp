// Dense complex linear algebra for open-system mode dynamics: matrix
// exponentials e^{-Kt}, stability verification, and the Gram integral
//   I(K) = ∫_0^∞ e^{-Ks} ⊗ e^{-K†s} ds
// obtained from the Sylvester equation (K⊗1)I + I(1⊗K†) = 1⊗1.
//
// Free functions are templated on the Eigen expression so callers can pass
// fixed-size matrices, blocks, or expressions directly. Eigen is the only
// dependency.
#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include <complex>
#include <limits>
#include <stdexcept>

namespace qswitch {

using ComplexMatrix = Eigen::MatrixXcd;

namespace detail {

template <typename Derived>
void require_square_finite(const Eigen::MatrixBase<Derived>& K, const char* op) {
  if (K.rows() == 0 || K.rows() != K.cols())
    throw std::invalid_argument(std::string(op) + ": matrix must be square and non-empty");
  if (!K.allFinite())
    throw std::invalid_argument(std::string(op) + ": matrix has non-finite entries");
}

}  // namespace detail

// e^{-Kt} by scaling-and-squaring with a diagonal Pade approximant (Eigen's
// MatrixFunctions backend). Preferred over eigendecomposition because the
// mode matrices here are complex symmetric, not normal, and may be defective
// at critical-damping points.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
expm(const Eigen::MatrixBase<Derived>& K, double t) {
  using Scalar = typename Derived::Scalar;
  detail::require_square_finite(K, "expm");
  if (!std::isfinite(t)) throw std::invalid_argument("expm: non-finite time");
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> A = K.derived() * Scalar(-t);
  return A.exp();
}

// True iff every eigenvalue of K has strictly positive real part, so that
// e^{-Kt} -> 0 and improper integrals of it converge. Borderline spectra
// (real part below 1e-12 * ||K||_F) are rejected as unstable.
template <typename Derived>
bool stability_check(const Eigen::MatrixBase<Derived>& K) {
  detail::require_square_finite(K, "stability_check");
  const ComplexMatrix Kc = K.derived().template cast<std::complex<double>>();
  Eigen::ComplexEigenSolver<ComplexMatrix> es(Kc, /*computeEigenvectors=*/false);
  const double margin = 1e-12 * Kc.norm();
  for (Eigen::Index i = 0; i < Kc.rows(); ++i)
    if (es.eigenvalues()[i].real() <= margin) return false;
  return true;
}

// The full set of decay integrals I_{jklm}(K) = ∫ (e^{-Ks})_{jk} (e^{-K†s})_{lm} ds
// for an m x m matrix K, stored as the m² x m² solution of the lifted
// Sylvester system in Kronecker order:
//   matrix((j-1)m + l, (k-1)m + mm) = I_{j,k,l,mm}   (1-based index pairs).
// The index permutation gram_form() rearranges the same data into the Gram
// matrix of the functions s -> (e^{-Ks})_{jk}, which is Hermitian positive
// semidefinite by construction.
struct GramIntegral {
  Eigen::Index source_dim = 0;      // m
  ComplexMatrix matrix;             // m² x m², Kronecker order (see above)
  double residual = 0.0;            // relative Frobenius residual of the Sylvester equation
  double condition_estimate = 0.0;  // 1 / rcond of the lifted m⁴ system

  // I_{jklm}; indices are 1-based, matching the integral's subscripts.
  std::complex<double> element(int j, int k, int l, int m) const {
    const auto d = static_cast<int>(source_dim);
    if (j < 1 || j > d || k < 1 || k > d || l < 1 || l > d || m < 1 || m > d)
      throw std::out_of_range("GramIntegral::element: index out of range");
    return matrix((j - 1) * d + (l - 1), (k - 1) * d + (m - 1));
  }

  // H((j,k),(l,m)) = ∫ (e^{-Ks})_{jk} conj((e^{-Ks})_{lm}) ds = I_{j,k,m,l},
  // with pair (j,k) flattened as (j-1)m + k. Hermitian PSD.
  ComplexMatrix gram_form() const {
    const auto d = static_cast<int>(source_dim);
    ComplexMatrix H(d * d, d * d);
    for (int j = 1; j <= d; ++j)
      for (int k = 1; k <= d; ++k)
        for (int l = 1; l <= d; ++l)
          for (int m = 1; m <= d; ++m)
            H((j - 1) * d + (k - 1), (l - 1) * d + (m - 1)) = element(j, k, m, l);
    return H;
  }
};

// Solve (K⊗1)X + X(1⊗K†) = 1 by the dense Kronecker lift (m⁴ unknowns; the
// models here have m ≤ 3, i.e. at most an 81x81 system). One step of
// iterative refinement keeps the residual near machine precision even when
// the decay rates span several decades. Throws if K is not stable (the
// integral diverges); ill-conditioning is reported via condition_estimate,
// not an error.
template <typename Derived>
GramIntegral gram_integral(const Eigen::MatrixBase<Derived>& K) {
  detail::require_square_finite(K, "gram_integral");
  const ComplexMatrix Kc = K.derived().template cast<std::complex<double>>();
  if (!stability_check(Kc))
    throw std::domain_error("gram_integral: matrix is not stable, integral diverges");

  const Eigen::Index m = Kc.rows(), m2 = m * m;
  const ComplexMatrix Im = ComplexMatrix::Identity(m, m);
  const ComplexMatrix A = Eigen::kroneckerProduct(Kc, Im);
  const ComplexMatrix B = Eigen::kroneckerProduct(Im, Kc.adjoint());

  // vec is column-major: vec(AX + XB) = (1⊗A + Bᵀ⊗1) vec(X).
  const ComplexMatrix I2 = ComplexMatrix::Identity(m2, m2);
  ComplexMatrix S = Eigen::kroneckerProduct(I2, A);
  S += Eigen::kroneckerProduct(B.transpose(), I2);

  const Eigen::VectorXcd rhs = I2.reshaped();
  Eigen::PartialPivLU<ComplexMatrix> lu(S);
  Eigen::VectorXcd x = lu.solve(rhs);
  x += lu.solve(rhs - S * x);

  GramIntegral out;
  out.source_dim = m;
  out.matrix = x.reshaped(m2, m2);
  out.residual = (A * out.matrix + out.matrix * B - I2).norm() / out.matrix.norm();
  const double rc = lu.rcond();
  out.condition_estimate = rc > 0 ? 1.0 / rc : std::numeric_limits<double>::infinity();
  return out;
}

// Single integral I_{jklm}(K) without keeping the full GramIntegral around.
template <typename Derived>
std::complex<double> element_integral(const Eigen::MatrixBase<Derived>& K, int j, int k, int l,
                                      int m) {
  return gram_integral(K).element(j, k, l, m);
}

}  // namespace qswitch
