#include "hkxor/kikuchi_even.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include "hkxor/combinatorics.hpp"

namespace hkxor {

uint64_t delta_count(int n, int k, int ell) {
  if (k < 0 || k % 2) throw DomainError("delta_count needs even k");
  if (2 * ell < k || ell > n || k > n) throw DomainError("need k/2 <= ell <= n");
  return binomial(k, k / 2) * binomial(n - k, ell - k / 2) * ipow3(ell - k / 2);
}

KikuchiGraph build_even(const Instance& inst, int ell, uint64_t max_vertices) {
  const int n = inst.n, k = inst.k;
  if (k % 2) throw DomainError("odd k: use the odd-arity pipeline");
  if (!inst.constraints.empty() && k < 2) throw DomainError("k must be at least 2");
  if (2 * ell < k || 2 * ell > n) throw DomainError("need k/2 <= ell <= n/2");
  const SliceIndex idx(n, ell);
  if (idx.size() > max_vertices || idx.size() > UINT32_MAX)
    throw ResourceError("Kikuchi graph has " + std::to_string(idx.size()) + " vertices, above the cap");

  KikuchiGraph g;
  g.n = n;
  g.k = k;
  g.ell = ell;
  g.N = idx.size();
  g.num_constraints = inst.size();
  g.delta = inst.constraints.empty() ? 0 : delta_count(n, k, ell);
  const int h = k / 2, s = ell - h;
  const uint64_t letters = ipow3(s);
  g.edges.reserve(inst.size() * g.delta);

  for (size_t cid = 0; cid < inst.size(); ++cid) {
    const auto& c = inst.constraints[cid];
    const PauliOp& P = c.pauli;
    g.abs_coeff_sum += std::abs(c.coeff);
    const std::vector<int> sup = P.sites();
    std::vector<int> off;
    for (int i = 0; i < n; ++i)
      if (!((P.support() >> i) & 1)) off.push_back(i);
    for_each_subset(k, h, [&](uint64_t sm) {
      const uint64_t smask = scatter(sm, sup);
      const PauliOp qp = P.restricted(smask), rp = P.restricted(P.support() & ~smask);
      for_each_subset(static_cast<int>(off.size()), s, [&](uint64_t tm) {
        const std::vector<int> tsites = pick(tm, off);
        for (uint64_t code = 0; code < letters; ++code) {
          const PauliOp w = letters_on(n, tsites, code);
          const PauliOp Q(n, qp.x | w.x, qp.z | w.z), R(n, rp.x | w.x, rp.z | w.z);
          const PhasedPauli prod = multiply(Q, R);
          if (!(prod.op == P) || prod.phase != 0 || !commutes(Q, R))
            throw std::logic_error("even Kikuchi edge violates Q R = +P");
          g.edges.push_back(Edge{static_cast<uint32_t>(idx.rank(Q)), static_cast<uint32_t>(idx.rank(R)),
                                 static_cast<uint32_t>(cid), c.coeff});
        }
      });
    });
  }
  std::sort(g.edges.begin(), g.edges.end(), [](const Edge& a, const Edge& b) {
    return std::tie(a.row, a.col, a.cid) < std::tie(b.row, b.col, b.cid);
  });
  g.degrees.assign(g.N, 0.0);
  double total = 0.0;
  for (const auto& e : g.edges) {
    g.degrees[e.row] += std::abs(e.w);
    total += std::abs(e.w);
  }
  g.d = ExactRatio{total, g.N};
  return g;
}

Regularizer regularize(const KikuchiGraph& g) {
  if (g.edges.empty()) throw DomainError("degenerate regularizer: graph has no edges");
  Regularizer r;
  const double d = g.d.value();
  r.gamma.resize(g.N);
  for (uint64_t q = 0; q < g.N; ++q) {
    r.gamma[q] = g.degrees[q] + d;
    r.trace += r.gamma[q];
  }
  // Tr(Gamma) = 2 * total degree = 2 * Delta * sum |b_C|.
  const double expect = 2.0 * static_cast<double>(g.delta) * g.abs_coeff_sum;
  if (std::abs(r.trace - expect) > 1e-9 * std::max(1.0, expect))
    throw std::logic_error("Tr(Gamma) differs from 2 Delta sum|b|");
  return r;
}

double average_degree_bound(int n, int k, int ell, double m) {
  return std::pow(static_cast<double>(ell) / (3.0 * n), k / 2.0) * m;
}

Eigen::SparseMatrix<double> signed_matrix(const KikuchiGraph& g) {
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(g.edges.size());
  for (const auto& e : g.edges) t.emplace_back(e.row, e.col, e.w);
  Eigen::SparseMatrix<double> m(static_cast<Eigen::Index>(g.N), static_cast<Eigen::Index>(g.N));
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

Eigen::SparseMatrix<double> normalized_matrix(const KikuchiGraph& g, const Regularizer& r) {
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(g.edges.size());
  for (const auto& e : g.edges) t.emplace_back(e.row, e.col, e.w / std::sqrt(r.gamma[e.row] * r.gamma[e.col]));
  Eigen::SparseMatrix<double> m(static_cast<Eigen::Index>(g.N), static_cast<Eigen::Index>(g.N));
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

std::string dump(const KikuchiGraph& g) {
  std::ostringstream out;
  out << "KIKUCHI v1 " << g.n << ' ' << g.k << ' ' << g.ell << ' ' << g.N << ' ' << g.edges.size() << '\n';
  for (const auto& e : g.edges) out << e.row << ' ' << e.col << ' ' << e.cid << ' ' << format_double(e.w) << '\n';
  return out.str();
}

std::vector<PauliOp> all_words(int n) {
  std::vector<PauliOp> out;
  for (int l = 0; l <= n; ++l) {
    auto s = enumerate_slice(n, l);
    out.insert(out.end(), s.begin(), s.end());
  }
  return out;
}

LevelNGraph build_level_n(const PauliMap& h, int n) {
  if (n < 0 || n > 6) throw ResourceError("level-n Kikuchi graph needs n <= 6");
  LevelNGraph g;
  g.n = n;
  g.vertices = all_words(n);
  g.N = g.vertices.size();
  std::unordered_map<PauliOp, uint32_t, PauliHash> pos;
  for (uint32_t i = 0; i < g.N; ++i) pos[g.vertices[i]] = i;
  std::map<std::pair<uint32_t, uint32_t>, std::complex<double>> acc;
  for (const auto& [P, hp] : h) {
    if (P.n != n) throw DimensionError("Pauli coefficient on wrong qubit count");
    if (hp == 0.0) continue;
    for (uint32_t q = 0; q < g.N; ++q) {
      const PauliOp& Q = g.vertices[q];
      // R = Q P as a word; then Q R = c P with c the phase of Q (Q P).
      const PauliOp R = multiply(Q, P).op;
      const PhasedPauli qr = multiply(Q, R);
      acc[{q, pos.at(R)}] += hp * std::conj(qr.coefficient());
    }
  }
  for (const auto& [rc, w] : acc)
    if (w != std::complex<double>(0.0, 0.0)) g.edges.push_back(ComplexEdge{rc.first, rc.second, w});
  return g;
}

}  // namespace hkxor
