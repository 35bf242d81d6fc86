// Odd-arity pipeline: regularity decomposition, odd Kikuchi graphs, local degrees, edge deletion.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "hkxor/instance.hpp"
#include "hkxor/kikuchi_even.hpp"

namespace hkxor {

struct Bucket {
  int t = 0;
  PauliOp U;
  std::vector<uint32_t> ids;  // ascending constraint ids
  bool residual = false;      // filled from leftovers after the greedy loop
};

struct BipartiteDecomposition {
  int n = 0, k = 0, ell = 0;
  double eps = 0.0;
  std::vector<int64_t> tau;  // tau[t] for t = 1..k; tau[0] unused
  std::vector<Bucket> buckets;
  bool size_warning = false;  // |H| < n * tau_1

  std::vector<size_t> slice(int t) const;  // bucket indices with this t
  size_t slice_constraints(int t) const;
};

int64_t tau_threshold(int n, int k, int ell, double eps, int t);
BipartiteDecomposition regularity_decompose(const Instance& inst, int ell, double eps);
std::string dump(const BipartiteDecomposition& dec);

struct RegularityReport {
  bool pass = true;
  size_t bucket = 0;
  PauliOp witness;
  std::vector<uint32_t> ids;  // constraints of the bucket subsumed by the witness
  double threshold = 0.0;
};

// Checks (eps, ell)-regularity of every bucket exhaustively over sub-words of its constraints.
RegularityReport regularity_check(const BipartiteDecomposition& dec, const Instance& inst, double eps, int ell);

// 2 * Delta^(t); Delta^(t) itself can be a half-integer when k = t.
uint64_t twice_delta_t(int n, int k, int t, int ell);
double delta_t_count(int n, int k, int t, int ell);

struct PairCount {
  uint64_t comm = 0;
  uint64_t anti = 0;
  double rho() const { return comm ? 0.5 * static_cast<double>(comm + anti) / static_cast<double>(comm) : 0.0; }
};

// Closed-form structured enumeration for words P, P' of weight r on n qubits.
PairCount count_pair(const PauliOp& P, const PauliOp& Pp, int ell);

struct EdgeType {
  uint32_t bucket = 0;
  uint32_t c1 = 0, c2 = 0;  // ordered constraint ids
  uint64_t comm = 0, anti = 0;
  double rho = 0.0;
  uint64_t kept = 0;
  double unit = 0.0;  // |weight| of each kept edge before the b b' sign
};

// Directed commuting edge Q -> R of a type; the stored matrix puts w/2 at (Q,R) and (R,Q).
struct OddEdge {
  uint32_t from = 0, to = 0;
  uint32_t type = 0;
  double w = 0.0;
};

struct OddKikuchiGraph {
  int n = 0, k = 0, t = 0, ell = 0;
  uint64_t N = 0;
  double delta_t = 0.0;
  std::vector<EdgeType> types;
  std::vector<OddEdge> edges;  // sorted by (from, to, type)
  std::vector<double> degrees;
  ExactRatio d;
  double gamma = 0.0;
  double unrepresented = 0.0;  // sum |b b'| over ordered pairs whose Commuting set is empty

  void recompute_degrees();
};

OddKikuchiGraph build_odd(const BipartiteDecomposition& dec, int t, const Instance& inst, int ell,
                          uint64_t max_vertices = kDefaultMaxVertices);

Eigen::SparseMatrix<double> signed_matrix(const OddKikuchiGraph& g);
Eigen::SparseMatrix<double> normalized_matrix(const OddKikuchiGraph& g, const Regularizer& r);
Regularizer regularize(const OddKikuchiGraph& g);
std::string dump(const OddKikuchiGraph& g);

struct LocalDegree {
  uint32_t q = 0;
  uint32_t c = 0;
  uint8_t b = 0;
  uint32_t count = 0;
};

struct LocalDegreeTable {
  std::vector<LocalDegree> entries;  // non-zero entries, sorted by (q, c, b)
  uint32_t max = 0;
  uint32_t at(uint32_t q, uint32_t c, uint8_t b) const;
};

LocalDegreeTable local_degrees(const OddKikuchiGraph& g);

struct EdgeDeletion {
  OddKikuchiGraph graph;
  double gamma = 0.0;
  uint64_t eta = 0;
  size_t deleted_local = 0;
  size_t deleted_equalize = 0;
};

uint64_t default_eta(int k, double eps, double D = 3.0);
EdgeDeletion edge_delete(const OddKikuchiGraph& g, uint64_t eta);

struct CSOperator {
  int t = 0;
  size_t num_buckets = 0;
  size_t num_constraints = 0;
  double scale = 0.0;     // k^2 |U^(t)| / (4 |H|^2)
  double sum_b2 = 0.0;
  double constant_term = 0.0;  // (k^2 |U^(t)| / |H|^2) sum b^2
  std::vector<uint32_t> ids;
  std::vector<PauliOp> reduced;  // P~_C = P_C with the bucket's U sites stripped
  std::vector<uint32_t> bucket_of;
};

CSOperator cs_operator(const BipartiteDecomposition& dec, int t, const Instance& inst);

}  // namespace hkxor
