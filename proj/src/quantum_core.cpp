#include "bellmax/quantum_core.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace bellmax {

namespace {

constexpr Complex kI{0.0, 1.0};

void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw std::invalid_argument(std::string(what) + ": matrix must be square and non-empty");
  }
}

std::vector<ComplexMatrix> build_gell_mann(int dim) {
  std::vector<ComplexMatrix> basis;
  basis.reserve(static_cast<std::size_t>(dim * dim - 1));
  for (int j = 0; j < dim; ++j) {
    for (int k = j + 1; k < dim; ++k) {
      ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
      m(j, k) = 1.0;
      m(k, j) = 1.0;
      basis.push_back(std::move(m));
    }
  }
  for (int j = 0; j < dim; ++j) {
    for (int k = j + 1; k < dim; ++k) {
      ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
      m(j, k) = -kI;
      m(k, j) = kI;
      basis.push_back(std::move(m));
    }
  }
  // diag(1, .., 1, -l, 0, .., 0) * sqrt(2 / (l (l + 1))) for l = 1 .. dim-1
  for (int l = 1; l < dim; ++l) {
    ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
    const double scale = std::sqrt(2.0 / (l * (l + 1.0)));
    for (int j = 0; j < l; ++j) m(j, j) = scale;
    m(l, l) = -l * scale;
    basis.push_back(std::move(m));
  }
  return basis;
}

}  // namespace

double max_abs_entry(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

bool is_finite(const ComplexMatrix& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    if (!std::isfinite(m.data()[i].real()) || !std::isfinite(m.data()[i].imag())) return false;
  }
  return true;
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  return m.rows() == m.cols() && max_abs_entry(m - m.adjoint()) <= tol;
}

ComplexMatrix identity(int dim) { return ComplexMatrix::Identity(dim, dim); }

ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

ComplexMatrix pauli_y() {
  ComplexMatrix m(2, 2);
  m << 0.0, -kI, kI, 0.0;
  return m;
}

ComplexMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

QuantumState::QuantumState(ComplexMatrix rho) : rho_(std::move(rho)) {
  require_square(rho_, "QuantumState");
  if (!is_finite(rho_)) throw std::invalid_argument("QuantumState: non-finite entries");
  if (!is_hermitian(rho_, kStateTolerance)) {
    throw std::invalid_argument("QuantumState: density matrix is not Hermitian");
  }
  const Complex tr = rho_.trace();
  if (std::abs(tr - Complex{1.0, 0.0}) > kStateTolerance) {
    throw std::invalid_argument("QuantumState: trace is not 1");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(rho_, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -kPsdTolerance) {
    throw std::invalid_argument("QuantumState: density matrix is not positive semidefinite");
  }
}

QuantumState QuantumState::pure(const ComplexVector& psi) {
  const double norm = psi.norm();
  if (psi.size() == 0 || !(norm > 0.0) || !std::isfinite(norm)) {
    throw std::invalid_argument("QuantumState::pure: state vector must be non-zero and finite");
  }
  const ComplexVector unit = psi / norm;
  ComplexMatrix rho = unit * unit.adjoint();
  // exact Hermitian symmetry, rounding in the outer product can break it
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return QuantumState(std::move(rho));
}

QuantumState QuantumState::maximally_mixed(int dim) {
  if (dim <= 0) throw std::invalid_argument("QuantumState::maximally_mixed: dim must be positive");
  return QuantumState(identity(dim) / static_cast<double>(dim));
}

ComplexMatrix HermitianGenerator::matrix() const {
  const auto& basis = gell_mann_basis(dim);
  if (coefficients.size() != basis.size()) {
    throw std::invalid_argument("HermitianGenerator: expected " + std::to_string(basis.size()) +
                                " coefficients, got " + std::to_string(coefficients.size()));
  }
  ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (!std::isfinite(coefficients[i])) {
      throw std::invalid_argument("HermitianGenerator: non-finite coefficient");
    }
    h += coefficients[i] * basis[i];
  }
  return h;
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix tensor(std::span<const ComplexMatrix> factors) {
  if (factors.empty()) throw std::invalid_argument("tensor: no factors");
  ComplexMatrix out = factors.front();
  for (std::size_t i = 1; i < factors.size(); ++i) out = tensor(out, factors[i]);
  return out;
}

double expectation(const QuantumState& state, const ComplexMatrix& obs) {
  if (obs.rows() != state.dim() || obs.cols() != state.dim()) {
    throw std::invalid_argument("expectation: observable dimension " + std::to_string(obs.rows()) +
                                "x" + std::to_string(obs.cols()) + " does not match state dimension " +
                                std::to_string(state.dim()));
  }
  if (!is_hermitian(obs)) throw std::invalid_argument("expectation: observable is not Hermitian");
  // Tr(rho A) = sum_ij rho_ij A_ji
  const Complex tr = (state.rho().transpose().cwiseProduct(obs)).sum();
  return tr.real();
}

HermitianEigen hermitian_eig(const ComplexMatrix& h) {
  require_square(h, "hermitian_eig");
  if (!is_hermitian(h)) throw std::invalid_argument("hermitian_eig: input is not Hermitian");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
  if (solver.info() != Eigen::Success) throw std::runtime_error("hermitian_eig: solver failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

ComplexMatrix unitary_from_hermitian(const HermitianGenerator& gen) {
  const auto eig = hermitian_eig(gen.matrix());
  ComplexVector phases(eig.eigenvalues.size());
  for (Eigen::Index i = 0; i < phases.size(); ++i) phases(i) = std::exp(kI * eig.eigenvalues(i));
  return eig.eigenvectors * phases.asDiagonal() * eig.eigenvectors.adjoint();
}

const std::vector<ComplexMatrix>& gell_mann_basis(int dim) {
  static const std::vector<ComplexMatrix> qubit = build_gell_mann(2);
  static const std::vector<ComplexMatrix> qutrit = build_gell_mann(3);
  switch (dim) {
    case 2:
      return qubit;
    case 3:
      return qutrit;
    default:
      throw std::invalid_argument("gell_mann_basis: unsupported dimension " + std::to_string(dim));
  }
}

}  // namespace bellmax
