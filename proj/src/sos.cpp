#include "hkxor/sos.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <deque>
#include <functional>
#include <iterator>
#include <sstream>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "hkxor/combinatorics.hpp"
#include "hkxor/kikuchi_even.hpp"
#include "hkxor/rng.hpp"

namespace hkxor {

namespace {

using cd = std::complex<double>;

std::vector<uint32_t> xor_ids(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
  std::vector<uint32_t> out;
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool same_value(cd a, cd b) { return std::abs(a - b) <= 1e-9; }

using OriginMap = std::unordered_map<PauliOp, PseudoExpectation::Origin, PauliHash>;
using ValueMap = std::unordered_map<PauliOp, cd, PauliHash>;

// Appends the derivation of p to out, returning its step index.
int derive_into(const PauliOp& p, const ValueMap& values, const OriginMap& origin, Derivation& out,
                std::unordered_map<PauliOp, int, PauliHash>& memo) {
  if (auto it = memo.find(p); it != memo.end()) return it->second;
  const auto& o = origin.at(p);
  DerivationStep s;
  s.word = p;
  s.value = values.at(p);
  s.axiom = o.axiom;
  if (o.axiom < 0 && !p.is_identity()) {
    s.left = derive_into(o.left, values, origin, out, memo);
    s.right = derive_into(o.right, values, origin, out, memo);
  }
  out.steps.push_back(s);
  const int idx = static_cast<int>(out.steps.size()) - 1;
  memo[p] = idx;
  return idx;
}

Derivation derive(const PauliOp& p, const ValueMap& values, const OriginMap& origin) {
  Derivation d;
  std::unordered_map<PauliOp, int, PauliHash> memo;
  derive_into(p, values, origin, d, memo);
  d.ids = origin.at(p).ids;
  return d;
}

// Basis relabeling between a fixed one-basis letter and Z.
PauliOp to_z(const PauliOp& p) { return PauliOp(p.n, 0, p.support()); }
PauliOp from_z(const PauliOp& p, char letter) {
  const uint64_t s = p.support();
  switch (letter) {
    case 'X': return PauliOp(p.n, s, 0);
    case 'Y': return PauliOp(p.n, s, s);
    default: return p;
  }
}

std::string value_string(cd v) {
  if (v.imag() == 0.0) return format_double(v.real());
  if (v.real() == 0.0) return format_double(v.imag()) + "i";
  return format_double(v.real()) + (v.imag() < 0 ? "" : "+") + format_double(v.imag()) + "i";
}

}  // namespace

std::complex<double> PseudoExpectation::value(const PauliOp& p) const {
  auto it = values.find(p);
  return it == values.end() ? cd(0.0, 0.0) : it->second;
}

std::complex<double> PseudoExpectation::value(const PhasedPauli& p) const { return p.coefficient() * value(p.op); }

Derivation PseudoExpectation::derivation(const PauliOp& p) const {
  if (!origin.count(p)) throw DomainError("word has no recorded derivation");
  return derive(p, values, origin);
}

std::vector<PauliOp> PseudoExpectation::assigned_words() const {
  std::vector<PauliOp> out;
  out.reserve(values.size());
  for (const auto& [p, v] : values) out.push_back(p);
  std::sort(out.begin(), out.end(), canonical_less);
  return out;
}

BuildResult max_entropy_build(const Instance& inst, int d, size_t max_words) {
  if (d < inst.k) throw DomainError("degree must be at least k");
  for (const auto& c : inst.constraints)
    if (std::abs(std::abs(c.coeff) - 1.0) > 1e-12) throw DomainError("max-entropy build needs coefficients in {+1,-1}");
  char letter = 'Z';
  const bool ob = inst.one_basis(&letter);
  const bool relabel = ob && letter != 'Z';
  const int n = inst.n;

  ValueMap values;
  OriginMap origin;
  std::vector<PauliOp> assigned;
  std::deque<size_t> queue;

  auto map_back = [&](const PauliOp& p) { return relabel ? from_z(p, letter) : p; };
  auto map_derivation = [&](Derivation dv) {
    for (auto& s : dv.steps) s.word = map_back(s.word);
    return dv;
  };

  std::optional<Contradiction> bad;
  // Assigns v to w; on conflict records a contradiction using o as the new origin.
  auto assign = [&](const PauliOp& w, cd v, PseudoExpectation::Origin o) {
    if (auto it = values.find(w); it != values.end()) {
      if (same_value(it->second, v)) return;
      Contradiction c;
      c.word = map_back(w);
      c.existing = it->second;
      c.derived = v;
      c.first = map_derivation(derive(w, values, origin));
      ValueMap v2 = values;
      OriginMap o2 = origin;
      v2[w] = v;
      o2[w] = o;
      c.second = map_derivation(derive(w, v2, o2));
      c.ids = xor_ids(c.first.ids, c.second.ids);
      bad = std::move(c);
      return;
    }
    if (assigned.size() >= max_words) throw ResourceError("max-entropy closure exceeds the word budget");
    values.emplace(w, v);
    origin.emplace(w, std::move(o));
    assigned.push_back(w);
    queue.push_back(assigned.size() - 1);
  };

  assign(PauliOp::identity(n), 1.0, {});
  for (size_t id = 0; id < inst.size() && !bad; ++id) {
    const auto& c = inst.constraints[id];
    PseudoExpectation::Origin o;
    o.axiom = static_cast<int>(id);
    o.ids = {static_cast<uint32_t>(id)};
    assign(relabel ? to_z(c.pauli) : c.pauli, c.coeff, o);
  }
  while (!queue.empty() && !bad) {
    const PauliOp r = assigned[queue.front()];
    queue.pop_front();
    const size_t upto = assigned.size();
    for (size_t i = 0; i < upto && !bad; ++i) {
      const PauliOp q = assigned[i];
      for (int order = 0; order < 2 && !bad; ++order) {
        const PauliOp& a = order ? r : q;
        const PauliOp& b = order ? q : r;
        // a^dagger b = a b = c W, so pE[W] = conj(c) conj(pE[a]) pE[b].
        const PhasedPauli prod = multiply(a, b);
        if (prod.op.weight() > d) continue;
        const cd v = std::conj(prod.coefficient()) * std::conj(values.at(a)) * values.at(b);
        PseudoExpectation::Origin o;
        o.left = a;
        o.right = b;
        o.ids = xor_ids(origin.at(a).ids, origin.at(b).ids);
        assign(prod.op, v, std::move(o));
      }
    }
  }
  if (bad) return *bad;

  PseudoExpectation pe;
  pe.n = n;
  pe.d = d;
  pe.experimental = !ob;
  for (auto& [w, v] : values) pe.values.emplace(map_back(w), v);
  for (auto& [w, o] : origin) {
    PseudoExpectation::Origin m = o;
    m.left = map_back(o.left);
    m.right = map_back(o.right);
    pe.origin.emplace(map_back(w), std::move(m));
  }
  return pe;
}

double value_of_hamiltonian(const PseudoExpectation& pe, const Instance& inst) {
  if (inst.size() == 0) return 0.5;
  cd acc = 0.0;
  for (const auto& c : inst.constraints) acc += c.coeff * pe.value(c.pauli);
  return 0.5 + acc.real() / (2.0 * static_cast<double>(inst.size()));
}

PositivityReport positivity_check(const PseudoExpectation& pe, int d) {
  const int h = d / 2;
  uint64_t count = 0;
  for (int w = 0; w <= std::min(h, pe.n); ++w) {
    count += binomial(pe.n, w) * ipow3(w);
    if (count > kMomentMatrixCap) throw ResourceError("moment matrix exceeds " + std::to_string(kMomentMatrixCap) + " rows");
  }
  std::vector<PauliOp> words;
  for (int w = 0; w <= std::min(h, pe.n); ++w) {
    auto s = enumerate_slice(pe.n, w);
    words.insert(words.end(), s.begin(), s.end());
  }
  const Eigen::Index N = static_cast<Eigen::Index>(words.size());
  Eigen::MatrixXcd m(N, N);
  for (Eigen::Index i = 0; i < N; ++i)
    for (Eigen::Index j = 0; j < N; ++j) m(i, j) = pe.value(multiply(words[i], words[j]));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
  PositivityReport r;
  r.size = words.size();
  r.min_eigenvalue = es.eigenvalues()(0);
  r.pass = r.min_eigenvalue >= -1e-8;
  return r;
}

std::vector<uint64_t> hyperedges(const Instance& inst) {
  std::vector<uint64_t> out;
  out.reserve(inst.size());
  for (const auto& c : inst.constraints) out.push_back(c.pauli.support());
  return out;
}

ExpansionReport boundary_expansion_check(const std::vector<uint64_t>& edges, double beta, int d, uint64_t samples,
                                         uint64_t seed) {
  ExpansionReport r;
  r.beta = beta;
  r.d = d;
  const int m = static_cast<int>(edges.size());
  const int smax = std::min(d, m);
  int kmax = 0;
  for (auto e : edges) kmax = std::max(kmax, std::popcount(e));

  if (d > 20) {
    r.exhaustive = false;
    CounterRng rng(seed, 11);
    for (uint64_t it = 0; it < samples && smax > 0; ++it) {
      const int s = 1 + static_cast<int>(rng.below(static_cast<uint64_t>(smax)));
      std::vector<uint32_t> pickd;
      for (int j = m - s; j < m; ++j) {  // Floyd
        const uint32_t t = static_cast<uint32_t>(rng.below(static_cast<uint64_t>(j) + 1));
        if (std::find(pickd.begin(), pickd.end(), t) == pickd.end()) pickd.push_back(t);
        else pickd.push_back(static_cast<uint32_t>(j));
      }
      uint64_t x = 0;
      for (auto i : pickd) x ^= edges[i];
      ++r.subsets_checked;
      if (std::popcount(x) < beta * s && (r.pass || s < static_cast<int>(r.witness.size()))) {
        r.pass = false;
        std::sort(pickd.begin(), pickd.end());
        r.witness = pickd;
        r.boundary = std::popcount(x);
      }
    }
    return r;
  }

  std::vector<uint32_t> cur;
  std::function<bool(int, uint64_t, int)> dfs = [&](int start, uint64_t x, int s) -> bool {
    const int j = static_cast<int>(cur.size());
    if (j == s) {
      ++r.subsets_checked;
      if (std::popcount(x) < beta * s) {
        r.pass = false;
        r.witness = cur;
        r.boundary = std::popcount(x);
        return true;
      }
      return false;
    }
    if (std::popcount(x) - kmax * (s - j) >= beta * s) return false;
    for (int i = start; i <= m - (s - j); ++i) {
      cur.push_back(static_cast<uint32_t>(i));
      if (dfs(i + 1, x ^ edges[i], s)) return true;
      cur.pop_back();
    }
    return false;
  };
  for (int s = 1; s <= smax; ++s)
    if (dfs(0, 0, s)) break;
  return r;
}

ExpansionReport boundary_expansion_check(const Instance& inst, double beta, int d) {
  return boundary_expansion_check(hyperedges(inst), beta, d);
}

std::vector<int> expansion_profile(const std::vector<uint64_t>& edges, int d) {
  const int m = static_cast<int>(edges.size());
  int kmax = 0;
  for (auto e : edges) kmax = std::max(kmax, std::popcount(e));
  std::vector<int> best(static_cast<size_t>(std::max(d, 0)) + 1, -1);
  for (int s = 1; s <= std::min(d, m); ++s) {
    int b = std::numeric_limits<int>::max();
    std::function<void(int, uint64_t, int)> dfs = [&](int start, uint64_t x, int j) {
      if (j == s) {
        b = std::min(b, std::popcount(x));
        return;
      }
      if (std::popcount(x) - kmax * (s - j) >= b) return;
      for (int i = start; i <= m - (s - j) && b > 0; ++i) dfs(i + 1, x ^ edges[i], j + 1);
    };
    dfs(0, 0, 0);
    best[s] = b;
  }
  return best;
}

std::vector<std::pair<uint32_t, uint32_t>> anticommuting_obstruction(const Instance& inst) {
  std::vector<std::pair<uint32_t, uint32_t>> out;
  for (uint32_t i = 0; i < inst.size(); ++i)
    for (uint32_t j = i + 1; j < inst.size(); ++j)
      if (!commutes(inst.constraints[i].pauli, inst.constraints[j].pauli)) out.emplace_back(i, j);
  return out;
}

MomentTable moments_from_distribution(int n, const std::vector<std::pair<std::vector<int>, double>>& dist, int d) {
  double total = 0.0;
  for (const auto& [x, p] : dist) {
    if (static_cast<int>(x.size()) != n) throw DimensionError("assignment length differs from n");
    if (p < 0.0) throw DomainError("negative probability");
    for (int v : x)
      if (v != 1 && v != -1) throw DomainError("assignment entries must be +1 or -1");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) throw DomainError("probabilities do not sum to 1");
  MomentTable mu;
  std::vector<int> all(n);
  for (int i = 0; i < n; ++i) all[i] = i;
  for (int w = 0; w <= std::min(d, n); ++w)
    for_each_subset(n, w, [&](uint64_t s) {
      double acc = 0.0;
      for (const auto& [x, p] : dist) {
        int sg = 1;
        for (uint64_t t = s; t; t &= t - 1) sg *= x[std::countr_zero(t)];
        acc += p * sg;
      }
      mu[s] = acc;
    });
  return mu;
}

Instance lifted_hamiltonian(const Instance& inst) {
  Instance out;
  out.n = inst.n;
  out.k = inst.k;
  out.model = Model::OneBasisZ;
  out.seed = inst.seed;
  for (const auto& c : inst.constraints) out.add(PauliOp(inst.n, 0, c.pauli.support()), c.coeff);
  return out;
}

PseudoExpectation lift_classical(const Instance& inst, const MomentTable& mu, int d) {
  if (d < inst.k) throw DomainError("degree must be at least k");
  PseudoExpectation pe;
  pe.n = inst.n;
  pe.d = d;
  for (int w = 0; w <= std::min(d, inst.n); ++w)
    for_each_subset(inst.n, w, [&](uint64_t s) {
      auto it = mu.find(s);
      if (it == mu.end()) throw DomainError("moment table has no entry for a monomial of degree " + std::to_string(w));
      if (it->second != 0.0) pe.values.emplace(PauliOp(inst.n, 0, s), it->second);
    });
  if (std::abs(pe.value(PauliOp::identity(inst.n)) - 1.0) > 1e-12) throw DomainError("moment table has pE[1] != 1");
  return pe;
}

double classical_pseudo_value(const Instance& inst, const MomentTable& mu) {
  if (inst.size() == 0) return 0.5;
  double acc = 0.0;
  for (const auto& c : inst.constraints) acc += c.coeff * mu.at(c.pauli.support());
  return 0.5 + acc / (2.0 * static_cast<double>(inst.size()));
}

GaussRational GaussRational::ipow(int p) {
  switch (((p % 4) + 4) % 4) {
    case 0: return {1, 0};
    case 1: return {0, 1};
    case 2: return {-1, 0};
    default: return {0, -1};
  }
}

ExactOperator exact_product(const ExactOperator& a, const ExactOperator& b, int n) {
  ExactOperator out;
  for (const auto& [pa, ca] : a)
    for (const auto& [pb, cb] : b) {
      const PhasedPauli pr = multiply(PauliOp(n, pa.first, pa.second), PauliOp(n, pb.first, pb.second));
      auto& slot = out[{pr.op.x, pr.op.z}];
      slot = slot + ca * cb * GaussRational::ipow(pr.phase);
    }
  for (auto it = out.begin(); it != out.end();) it = it->second.is_zero() ? out.erase(it) : std::next(it);
  return out;
}

ExactOperator exact_adjoint(const ExactOperator& a) {
  ExactOperator out;
  for (const auto& [p, c] : a) out[p] = c.conj();
  return out;
}

ObstructionValue anticommuting_value(const PauliOp& p, const PauliOp& q) {
  if (p.n != q.n) throw DimensionError("words on different qubit counts");
  if (commutes(p, q)) throw DomainError("P and Q commute");
  const int n = p.n;
  const boost::rational<long long> third(1, 3);
  const PhasedPauli pq = multiply(p, q);
  ExactOperator h;
  h[{p.x, p.z}] = GaussRational(-third);
  h[{q.x, q.z}] = GaussRational(third);
  h[{pq.op.x, pq.op.z}] = GaussRational(third) * GaussRational::ipow(pq.phase);
  ObstructionValue r;
  r.hdagger_h = exact_product(exact_adjoint(h), h, n);
  for (const auto& [w, c] : r.hdagger_h) {
    const PauliOp word(n, w.first, w.second);
    if (!(word.is_identity() || word == p || word == q))
      throw std::logic_error("H^dagger H has a term outside {Id, P, Q}");
    r.value = r.value + c;
  }
  return r;
}

std::string dump(const PseudoExpectation& pe) {
  std::ostringstream o;
  o << "PSEXP v1 " << pe.n << ' ' << pe.d << '\n';
  for (const auto& w : pe.assigned_words()) {
    const cd v = pe.value(w);
    if (v != cd(0.0, 0.0)) o << to_dense(w) << ' ' << value_string(v) << '\n';
  }
  return o.str();
}

std::string dump(const Contradiction& c) {
  std::ostringstream o;
  o << "CONTRADICTION v1 " << c.word.n << '\n';
  o << "word " << to_dense(c.word) << '\n';
  o << "existing " << value_string(c.existing) << '\n';
  o << "derived " << value_string(c.derived) << '\n';
  o << "ids";
  for (auto i : c.ids) o << ' ' << i;
  o << '\n';
  int which = 1;
  for (const Derivation* d : {&c.first, &c.second}) {
    o << "derivation " << which++ << ' ' << d->steps.size() << '\n';
    for (size_t i = 0; i < d->steps.size(); ++i) {
      const auto& s = d->steps[i];
      o << i << ' ' << to_dense(s.word) << ' ' << value_string(s.value);
      if (s.axiom >= 0) o << " axiom=" << s.axiom;
      else if (s.left >= 0) o << " from=" << s.left << ',' << s.right;
      else o << " normalization";
      o << '\n';
    }
  }
  return o.str();
}

}  // namespace hkxor
