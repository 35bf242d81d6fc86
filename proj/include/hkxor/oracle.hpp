// Dense 2^n ground truth: assembly, exact eigenvalues, quadratic-form checks, classical brute force.
#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "hkxor/instance.hpp"
#include "hkxor/kikuchi_even.hpp"

namespace hkxor {

inline constexpr int kDenseMaxSites = 12;
inline constexpr int kStateMaxSites = 8;

struct DenseOperator {
  int n = 0;
  Eigen::MatrixXcd m;
};

// y = P v for a dense 2^n vector.
Eigen::VectorXcd apply_pauli(const PauliOp& p, const Eigen::VectorXcd& v);

DenseOperator assemble(const Instance& inst);
DenseOperator assemble(const PauliMap& h, int n, double identity_coeff = 0.0);

// <op, P> / 2^n.
std::complex<double> pauli_component(const DenseOperator& op, const PauliOp& p);

double lambda_max(const DenseOperator& op);
double lambda_max(const Eigen::MatrixXcd& m);

struct QuadraticFormCheck {
  std::complex<double> lhs;  // (psi^l)^dagger (A* (x) Id) psi^l
  std::complex<double> rhs;  // Delta * sum_C b_C <psi|P_C|psi>
  double rel_error = 0.0;
};

QuadraticFormCheck quadratic_form_check(const Instance& inst, int ell, const Eigen::VectorXcd& psi);
QuadraticFormCheck quadratic_form_check(const Instance& inst, const KikuchiGraph& g, const Eigen::VectorXcd& psi);

// Level-n graph as a dense 4^n matrix, its Id-tensored version, and K^_H = sum_P h_P A_P (x) P.
Eigen::MatrixXcd level_n_dense(const LevelNGraph& g);
Eigen::MatrixXcd level_n_tensor_id(const LevelNGraph& g);
Eigen::MatrixXcd hatted_operator(const PauliMap& h, int n);

// Phi_I(x) = sum_C b_C prod_{i in C} x_i over supports; x_i in {+1,-1}.
double classical_phi(const Instance& inst, const std::vector<int>& x);
double classical_value(const Instance& inst, const std::vector<int>& x);

struct ClassicalMax {
  double value = 0.5;
  std::vector<int> argmax;
};

// Lexicographically first argmax with +1 before -1 and x_1 most significant.
ClassicalMax classical_max(const Instance& inst);

}  // namespace hkxor
