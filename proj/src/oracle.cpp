#include "hkxor/oracle.hpp"

#include <bit>
#include <cmath>
#include <unordered_map>

#include <Eigen/Eigenvalues>

#include "hkxor/combinatorics.hpp"

namespace hkxor {

namespace {

using cd = std::complex<double>;

cd ipow(int p) {
  static const cd kI[4] = {cd(1, 0), cd(0, 1), cd(-1, 0), cd(0, -1)};
  return kI[((p % 4) + 4) % 4];
}

void check_dense_n(int n, int cap) {
  if (n < 0 || n > cap) throw ResourceError("dense oracle limited to n <= " + std::to_string(cap));
}

// Adds c * P into m, touching 2^n entries.
void add_pauli(Eigen::MatrixXcd& m, const PauliOp& p, cd c) {
  const int n = p.n;
  const uint64_t xb = dense_bits(p.x, n), zb = dense_bits(p.z, n);
  const cd ph = c * ipow(std::popcount(p.x & p.z));
  const uint64_t dim = uint64_t{1} << n;
  for (uint64_t j = 0; j < dim; ++j) {
    const double s = (std::popcount(j & zb) & 1) ? -1.0 : 1.0;
    m(static_cast<Eigen::Index>(j ^ xb), static_cast<Eigen::Index>(j)) += s * ph;
  }
}

Eigen::MatrixXcd pauli_matrix(const PauliOp& p) {
  const Eigen::Index dim = Eigen::Index{1} << p.n;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  add_pauli(m, p, 1.0);
  return m;
}

}  // namespace

Eigen::VectorXcd apply_pauli(const PauliOp& p, const Eigen::VectorXcd& v) {
  const int n = p.n;
  if (v.size() != (Eigen::Index{1} << n)) throw DimensionError("state dimension does not match 2^n");
  const uint64_t xb = dense_bits(p.x, n), zb = dense_bits(p.z, n);
  const cd ph = ipow(std::popcount(p.x & p.z));
  Eigen::VectorXcd out(v.size());
  for (uint64_t j = 0; j < static_cast<uint64_t>(v.size()); ++j) {
    const double s = (std::popcount(j & zb) & 1) ? -1.0 : 1.0;
    out(static_cast<Eigen::Index>(j ^ xb)) = s * ph * v(static_cast<Eigen::Index>(j));
  }
  return out;
}

DenseOperator assemble(const PauliMap& h, int n, double identity_coeff) {
  check_dense_n(n, kDenseMaxSites);
  DenseOperator op;
  op.n = n;
  const Eigen::Index dim = Eigen::Index{1} << n;
  op.m = Eigen::MatrixXcd::Identity(dim, dim) * identity_coeff;
  for (const auto& [p, c] : h) {
    if (p.n != n) throw DimensionError("Pauli word on wrong qubit count");
    add_pauli(op.m, p, c);
  }
  return op;
}

DenseOperator assemble(const Instance& inst) {
  check_dense_n(inst.n, kDenseMaxSites);
  PauliMap h;
  const double scale = inst.size() ? 1.0 / (2.0 * static_cast<double>(inst.size())) : 0.0;
  for (const auto& c : inst.constraints) h.emplace_back(c.pauli, c.coeff * scale);
  return assemble(h, inst.n, 0.5);
}

std::complex<double> pauli_component(const DenseOperator& op, const PauliOp& p) {
  // Tr(P^dagger M) = sum_j conj(<j xor x| P |j>) M(j xor x, j)
  const int n = op.n;
  const uint64_t xb = dense_bits(p.x, n), zb = dense_bits(p.z, n);
  const cd ph = ipow(std::popcount(p.x & p.z));
  const uint64_t dim = uint64_t{1} << n;
  cd acc = 0.0;
  for (uint64_t j = 0; j < dim; ++j) {
    const double s = (std::popcount(j & zb) & 1) ? -1.0 : 1.0;
    acc += std::conj(s * ph) * op.m(static_cast<Eigen::Index>(j ^ xb), static_cast<Eigen::Index>(j));
  }
  return acc / static_cast<double>(dim);
}

double lambda_max(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols()) throw DimensionError("matrix is not square");
  if (m.rows() == 0) return 0.0;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale) throw DomainError("operator is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(m.rows() - 1);
}

double lambda_max(const DenseOperator& op) { return lambda_max(op.m); }

QuadraticFormCheck quadratic_form_check(const Instance& inst, const KikuchiGraph& g, const Eigen::VectorXcd& psi) {
  check_dense_n(inst.n, kStateMaxSites);
  if (psi.size() != (Eigen::Index{1} << inst.n)) throw DimensionError("state dimension does not match 2^n");
  if (std::abs(psi.norm() - 1.0) > 1e-9) throw DomainError("state is not a unit vector");
  QuadraticFormCheck r;
  double scale = 0.0;
  for (const auto& c : inst.constraints) {
    r.rhs += c.coeff * psi.dot(apply_pauli(c.pauli, psi));
    scale += std::abs(c.coeff);
  }
  r.rhs *= static_cast<double>(g.delta);
  scale *= static_cast<double>(g.delta);
  if (!g.edges.empty()) {
    const SliceIndex idx(inst.n, g.ell);
    std::vector<Eigen::VectorXcd> blocks(idx.size());
    for (uint64_t q = 0; q < idx.size(); ++q) blocks[q] = apply_pauli(idx.unrank(q), psi);
    for (const auto& e : g.edges) r.lhs += e.w * blocks[e.row].dot(blocks[e.col]);
  }
  const double diff = std::abs(r.lhs - r.rhs);
  const double denom = std::max(std::abs(r.rhs), 1e-12 * scale);
  r.rel_error = denom > 0.0 ? diff / denom : diff;
  return r;
}

QuadraticFormCheck quadratic_form_check(const Instance& inst, int ell, const Eigen::VectorXcd& psi) {
  return quadratic_form_check(inst, build_even(inst, ell), psi);
}

Eigen::MatrixXcd level_n_dense(const LevelNGraph& g) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(g.N), static_cast<Eigen::Index>(g.N));
  for (const auto& e : g.edges) m(e.row, e.col) += e.w;
  return m;
}

Eigen::MatrixXcd level_n_tensor_id(const LevelNGraph& g) {
  const Eigen::MatrixXcd k = level_n_dense(g);
  const Eigen::Index d = Eigen::Index{1} << g.n;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(k.rows() * d, k.cols() * d);
  for (Eigen::Index i = 0; i < k.rows(); ++i)
    for (Eigen::Index j = 0; j < k.cols(); ++j)
      if (k(i, j) != cd(0.0, 0.0))
        for (Eigen::Index a = 0; a < d; ++a) out(i * d + a, j * d + a) = k(i, j);
  return out;
}

Eigen::MatrixXcd hatted_operator(const PauliMap& h, int n) {
  if (n < 0 || n > 3) throw ResourceError("hatted operator limited to n <= 3");
  const std::vector<PauliOp> words = all_words(n);
  const Eigen::Index N = static_cast<Eigen::Index>(words.size()), d = Eigen::Index{1} << n;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(N * d, N * d);
  for (const auto& [P, hp] : h) {
    if (P.n != n) throw DimensionError("Pauli word on wrong qubit count");
    if (hp == 0.0) continue;
    const Eigen::MatrixXcd pm = pauli_matrix(P);
    for (Eigen::Index q = 0; q < N; ++q)
      for (Eigen::Index r = 0; r < N; ++r)
        if (multiply(words[q], words[r]).op == P) out.block(q * d, r * d, d, d) += hp * pm;
  }
  return out;
}

double classical_phi(const Instance& inst, const std::vector<int>& x) {
  if (static_cast<int>(x.size()) != inst.n) throw DimensionError("assignment length differs from n");
  double phi = 0.0;
  for (const auto& c : inst.constraints) {
    int s = 1;
    for (int i : c.support) {
      if (x[i] != 1 && x[i] != -1) throw DomainError("assignment entries must be +1 or -1");
      s *= x[i];
    }
    phi += c.coeff * s;
  }
  return phi;
}

double classical_value(const Instance& inst, const std::vector<int>& x) {
  const double phi = classical_phi(inst, x);
  return inst.size() ? 0.5 + phi / (2.0 * static_cast<double>(inst.size())) : 0.5;
}

ClassicalMax classical_max(const Instance& inst) {
  const int n = inst.n;
  if (n < 0 || n > 24) throw ResourceError("classical_max limited to n <= 24");
  std::vector<uint64_t> masks;
  std::vector<double> coeff;
  for (const auto& c : inst.constraints) {
    uint64_t s = 0;
    for (int i : c.support) s |= uint64_t{1} << i;
    masks.push_back(dense_bits(s, n));
    coeff.push_back(c.coeff);
  }
  const uint64_t dim = uint64_t{1} << n;
  double best = -std::numeric_limits<double>::infinity();
  uint64_t arg = 0;
  for (uint64_t a = 0; a < dim; ++a) {
    double phi = 0.0;
    for (size_t i = 0; i < masks.size(); ++i) phi += (std::popcount(a & masks[i]) & 1) ? -coeff[i] : coeff[i];
    if (phi > best) {
      best = phi;
      arg = a;
    }
  }
  ClassicalMax r;
  r.argmax.resize(n);
  for (int i = 0; i < n; ++i) r.argmax[i] = ((arg >> (n - 1 - i)) & 1) ? -1 : 1;
  r.value = inst.size() ? 0.5 + best / (2.0 * static_cast<double>(inst.size())) : 0.5;
  return r;
}

}  // namespace hkxor
