#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace bellmax {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Tolerances shared by the validation helpers.
inline constexpr double kStateTolerance = 1e-10;
inline constexpr double kPsdTolerance = 1e-9;
inline constexpr double kHermitianTolerance = 1e-8;

double max_abs_entry(const ComplexMatrix& m);
bool is_finite(const ComplexMatrix& m);
bool is_hermitian(const ComplexMatrix& m, double tol = kHermitianTolerance);

ComplexMatrix identity(int dim);
ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();

/// A validated density matrix. Pure states are stored as rank-1 projectors so
/// pure and mixed states share a single evaluation path.
class QuantumState {
 public:
  /// Throws std::invalid_argument unless rho is square, finite, Hermitian,
  /// unit trace and positive semidefinite within the state tolerances.
  explicit QuantumState(ComplexMatrix rho);

  /// Normalizes psi and stores |psi><psi|.
  static QuantumState pure(const ComplexVector& psi);
  static QuantumState maximally_mixed(int dim);

  int dim() const { return static_cast<int>(rho_.rows()); }
  const ComplexMatrix& rho() const { return rho_; }

 private:
  ComplexMatrix rho_;
};

/// Real coefficients theta_i of H = sum_i theta_i * lambda_i over the
/// generalized Gell-Mann basis of the given dimension.
struct HermitianGenerator {
  int dim = 3;
  std::vector<double> coefficients;

  ComplexMatrix matrix() const;
};

struct HermitianEigen {
  RealVector eigenvalues;      // ascending
  ComplexMatrix eigenvectors;  // columns, orthonormal
};

/// Kronecker product a (x) b.
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix tensor(std::span<const ComplexMatrix> factors);

/// Tr(rho * obs) for a Hermitian observable. Throws on dimension mismatch or a
/// non-Hermitian observable.
double expectation(const QuantumState& state, const ComplexMatrix& obs);

HermitianEigen hermitian_eig(const ComplexMatrix& h);

/// U = exp(iH) computed through the eigendecomposition of H.
ComplexMatrix unitary_from_hermitian(const HermitianGenerator& gen);

/// Gell-Mann basis for dim 3 (lambda_1..lambda_8: symmetric off-diagonal
/// (01, 02, 12), antisymmetric off-diagonal (01, 02, 12), then the two
/// diagonal generators) and the Pauli matrices (x, y, z) for dim 2.
/// Every element satisfies Tr(l_i l_j) = 2 delta_ij.
const std::vector<ComplexMatrix>& gell_mann_basis(int dim);

}  // namespace bellmax
