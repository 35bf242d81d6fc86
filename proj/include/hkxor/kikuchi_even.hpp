// Even-arity level-l Kikuchi graphs, degree regularizer, and the level-n variant.
#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "hkxor/instance.hpp"

namespace hkxor {

struct Edge {
  uint32_t row = 0;
  uint32_t col = 0;
  uint32_t cid = 0;
  double w = 0.0;
};

struct ExactRatio {
  double num = 0.0;  // exact integer when every |b_C| = 1
  uint64_t den = 1;
  double value() const { return den ? num / static_cast<double>(den) : 0.0; }
};

struct KikuchiGraph {
  int n = 0, k = 0, ell = 0;
  uint64_t N = 0;
  uint64_t delta = 0;
  size_t num_constraints = 0;
  double abs_coeff_sum = 0.0;
  std::vector<Edge> edges;      // ordered pairs, sorted by (row, col, cid)
  std::vector<double> degrees;  // sum of |w| over edges leaving each vertex
  ExactRatio d;                 // total degree / N
};

struct Regularizer {
  std::vector<double> gamma;
  double trace = 0.0;
};

// Default cap on vertices for any Kikuchi construction.
inline constexpr uint64_t kDefaultMaxVertices = 4'000'000;

struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

uint64_t delta_count(int n, int k, int ell);
KikuchiGraph build_even(const Instance& inst, int ell, uint64_t max_vertices = kDefaultMaxVertices);
Regularizer regularize(const KikuchiGraph& g);
double average_degree_bound(int n, int k, int ell, double m);

// Signed symmetric matrix A* and the normalized Gamma^{-1/2} A* Gamma^{-1/2}.
Eigen::SparseMatrix<double> signed_matrix(const KikuchiGraph& g);
Eigen::SparseMatrix<double> normalized_matrix(const KikuchiGraph& g, const Regularizer& r);

std::string dump(const KikuchiGraph& g);

// Level-n graph over all 4^n words; entry (Q,R) carries h_P * conj(c) where Q R = c P.
struct ComplexEdge {
  uint32_t row = 0;
  uint32_t col = 0;
  std::complex<double> w;
};

struct LevelNGraph {
  int n = 0;
  uint64_t N = 0;
  std::vector<PauliOp> vertices;
  std::vector<ComplexEdge> edges;
};

using PauliMap = std::vector<std::pair<PauliOp, double>>;

std::vector<PauliOp> all_words(int n);
LevelNGraph build_level_n(const PauliMap& h, int n);

}  // namespace hkxor
