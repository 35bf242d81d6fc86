// Spectral norms of sparse symmetric matrices and the even/odd certification pipelines.
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "hkxor/instance.hpp"
#include "hkxor/kikuchi_even.hpp"

namespace hkxor {

struct SolverOptions {
  double tol = 1e-6;
  uint64_t seed = 0x5eedULL;
  int krylov = 96;
  int max_restarts = 200;
  int64_t dense_limit = 600;
};

struct SpectralResult {
  double value = 0.0;  // max |lambda|
  double residual = 0.0;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  int64_t iters = 0;
  std::string method;
};

struct NonConvergence : std::runtime_error {
  NonConvergence(const std::string& m, SpectralResult b) : std::runtime_error(m), best(std::move(b)) {}
  SpectralResult best;
};

SpectralResult spectral_norm(const Eigen::SparseMatrix<double>& m, const SolverOptions& opt = {});

enum class Branch { Auto, Even, Odd };
Branch parse_branch(const std::string& s);

struct CertifyOptions {
  SolverOptions solver;
  uint64_t max_vertices = kDefaultMaxVertices;
  double D = 3.0;
  std::optional<uint64_t> eta;
};

struct SubCertificate {
  int t = 0;
  size_t buckets = 0;
  size_t constraints = 0;
  double constant_term = 0.0;
  double norm_term = 0.0;
  double unrepresented = 0.0;  // scale * sum |b b'| over pairs with no commuting edge
  double algval = 0.0;        // bound on lambda_max(U_t)
  double contribution = 0.0;  // bound on eps^(t)
  double gamma = 0.0;
  uint64_t eta = 0;
  uint64_t N = 0;
  size_t edges = 0;
  double delta_t = 0.0;
  double norm = 0.0;
  bool fallback = false;
  SpectralResult solver;
};

struct Certificate {
  std::string digest;
  std::string branch;
  int n = 0, k = 0, ell = 0;
  size_t m = 0;
  double eps = 0.0;
  double tol = 0.0;
  double algval = 0.5;
  uint64_t N = 0;
  size_t edges = 0;
  double norm = 0.0;
  double trace_gamma = 0.0;
  SpectralResult solver;
  std::vector<SubCertificate> per_t;
  std::vector<std::string> warnings;
  double seconds = 0.0;
};

Certificate certify_even(const Instance& inst, int ell, double tol, const CertifyOptions& opt = {});
Certificate certify_odd(const Instance& inst, int ell, double eps, double tol, const CertifyOptions& opt = {});
Certificate certify(const Instance& inst, int ell, double eps, double tol, Branch branch,
                    const CertifyOptions& opt = {});
std::string to_report(const Certificate& c);

struct TraceMoment {
  double value = 0.0;  // Tr((Gamma^-1 A*)^{2r}) = ||A~^r||_F^2
  double root = 0.0;   // value^{1/2r}
};

TraceMoment trace_moment(const Eigen::SparseMatrix<double>& normalized, int r, uint64_t nnz_budget = 50'000'000);
TraceMoment trace_moment(const KikuchiGraph& g, const Regularizer& reg, int r, uint64_t nnz_budget = 50'000'000);

}  // namespace hkxor
