#include "hkxor/kikuchi_odd.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include "hkxor/combinatorics.hpp"

namespace hkxor {

std::vector<size_t> BipartiteDecomposition::slice(int t) const {
  std::vector<size_t> out;
  for (size_t i = 0; i < buckets.size(); ++i)
    if (buckets[i].t == t) out.push_back(i);
  return out;
}

size_t BipartiteDecomposition::slice_constraints(int t) const {
  size_t s = 0;
  for (const auto& b : buckets)
    if (b.t == t) s += b.ids.size();
  return s;
}

int64_t tau_threshold(int n, int k, int ell, double eps, int t) {
  const double v = std::max(1.0, std::pow(3.0 * n / ell, k / 2.0 - t)) * 4.0 * k * k / (eps * eps);
  return static_cast<int64_t>(std::ceil(v - 1e-9 * v));
}

namespace {

void sub_words(const PauliOp& p, int w, std::vector<PauliOp>& out) {
  out.clear();
  const auto sites = p.sites();
  for_each_subset(static_cast<int>(sites.size()), w,
                  [&](uint64_t m) { out.push_back(p.restricted(scatter(m, sites))); });
}

PauliOp first_site(const PauliOp& p) {
  const uint64_t s = p.support();
  return p.restricted(s & (~s + 1));
}

}  // namespace

BipartiteDecomposition regularity_decompose(const Instance& inst, int ell, double eps) {
  const int n = inst.n, k = inst.k;
  if (k < 1) throw DomainError("need k >= 1");
  if (2 * ell < k) throw DomainError("need ell >= k/2");
  if (!(eps > 0.0 && eps <= 1.0)) throw DomainError("eps must lie in (0,1]");
  BipartiteDecomposition dec;
  dec.n = n;
  dec.k = k;
  dec.ell = ell;
  dec.eps = eps;
  dec.tau.assign(k + 1, 0);
  for (int t = 1; t <= k; ++t) dec.tau[t] = tau_threshold(n, k, ell, eps, t);

  std::vector<char> left(inst.size(), 1);
  std::vector<PauliOp> subs;
  for (int t = k; t >= 1; --t) {
    const auto tau = static_cast<size_t>(dec.tau[t]);
    for (;;) {
      std::unordered_map<PauliOp, std::vector<uint32_t>, PauliHash> cand;
      for (uint32_t c = 0; c < inst.size(); ++c) {
        if (!left[c]) continue;
        sub_words(inst.constraints[c].pauli, t, subs);
        for (const auto& u : subs) cand[u].push_back(c);
      }
      const PauliOp* best = nullptr;
      for (const auto& [u, ids] : cand)
        if (ids.size() >= tau && (!best || canonical_less(u, *best))) best = &u;
      if (!best) break;
      Bucket b;
      b.t = t;
      b.U = *best;
      const auto& ids = cand.at(*best);
      b.ids.assign(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(tau));
      for (auto c : b.ids) left[c] = 0;
      dec.buckets.push_back(std::move(b));
    }
  }
  std::map<std::tuple<int, int>, size_t> residual;  // keyed by (site, letter digit)
  std::vector<Bucket> rest;
  for (uint32_t c = 0; c < inst.size(); ++c) {
    if (!left[c]) continue;
    const PauliOp u = first_site(inst.constraints[c].pauli);
    const auto site = u.sites().front();
    const char l = u.letter(site);
    const auto key = std::make_tuple(site, l == 'X' ? 0 : l == 'Y' ? 1 : 2);
    auto it = residual.find(key);
    if (it == residual.end()) {
      it = residual.emplace(key, rest.size()).first;
      rest.push_back(Bucket{1, u, {}, true});
    }
    rest[it->second].ids.push_back(c);
  }
  std::vector<std::pair<std::tuple<int, int>, size_t>> order(residual.begin(), residual.end());
  for (const auto& [key, idx] : order) dec.buckets.push_back(std::move(rest[idx]));
  dec.size_warning = static_cast<double>(inst.size()) < static_cast<double>(n) * static_cast<double>(dec.tau[1]);
  return dec;
}

std::string dump(const BipartiteDecomposition& dec) {
  std::ostringstream out;
  for (const auto& b : dec.buckets) {
    out << "t=" << b.t << " U=" << to_sparse(b.U) << " ids=";
    for (size_t i = 0; i < b.ids.size(); ++i) out << (i ? "," : "") << b.ids[i];
    out << '\n';
  }
  return out.str();
}

RegularityReport regularity_check(const BipartiteDecomposition& dec, const Instance& inst, double eps, int ell) {
  RegularityReport rep;
  const int n = inst.n, k = inst.k;
  std::vector<PauliOp> subs;
  for (size_t bi = 0; bi < dec.buckets.size(); ++bi) {
    const auto& b = dec.buckets[bi];
    const int u = b.U.weight();
    for (int w = u + 1; w <= k; ++w) {
      const double thr = std::max(std::pow(3.0 * n / ell, k / 2.0 - 1.0 - w), 1.0) / (eps * eps);
      std::unordered_map<PauliOp, std::vector<uint32_t>, PauliHash> cnt;
      for (auto c : b.ids) {
        sub_words(inst.constraints[c].pauli, w, subs);
        for (const auto& s : subs) cnt[s].push_back(c);
      }
      const PauliOp* worst = nullptr;
      for (const auto& [W, ids] : cnt)
        if (static_cast<double>(ids.size()) > thr && (!worst || canonical_less(W, *worst))) worst = &W;
      if (worst) {
        rep.pass = false;
        rep.bucket = bi;
        rep.witness = *worst;
        rep.ids = cnt.at(*worst);
        rep.threshold = thr;
        return rep;
      }
    }
  }
  return rep;
}

uint64_t twice_delta_t(int n, int k, int t, int ell) {
  const int r = k - t;
  if (t < 1 || t > k) throw DomainError("need 1 <= t <= k");
  if (ell < r) throw DomainError("infeasible level: ell < k - t");
  const uint64_t split = binomial(r, (r + 1) / 2) * binomial(r, r / 2) * ((r % 2) ? 2 : 1);
  return split * binomial(2 * n - 2 * r, ell - r) * ipow3(ell - r);
}

double delta_t_count(int n, int k, int t, int ell) { return 0.5 * static_cast<double>(twice_delta_t(n, k, t, ell)); }

namespace {

// Visits every (Q, R) meeting conditions 1-2 for (P, P'), with Q, R as 2n-site words.
template <class F>
void enumerate_pair(const PauliOp& P, const PauliOp& Pp, int ell, F&& f) {
  const int n = P.n, r = P.weight();
  if (Pp.weight() != r) throw DomainError("paired words differ in weight");
  if (2 * n > kMaxSites) throw DimensionError("odd Kikuchi graphs need 2n <= 64");
  if (ell < r) throw DomainError("infeasible level: ell < k - t");
  const auto sp = P.sites(), spp = Pp.sites();
  std::vector<int> free;  // register-1 sites off supp(P), then register-2 sites off supp(P')
  for (int i = 0; i < n; ++i)
    if (!((P.support() >> i) & 1)) free.push_back(i);
  for (int i = 0; i < n; ++i)
    if (!((Pp.support() >> i) & 1)) free.push_back(n + i);
  const int s = ell - r;
  const uint64_t letters = ipow3(s);
  const int lo = r / 2, hi = r - lo;
  std::vector<std::pair<int, int>> splits{{lo, hi}};
  if (lo != hi) splits.emplace_back(hi, lo);
  const uint64_t lowmask = site_mask(n);
  for (const auto& [a, b] : splits) {
    for_each_subset(r, a, [&](uint64_t m1) {
      const uint64_t s1 = scatter(m1, sp);
      const PauliOp q1 = P.restricted(s1), r1 = P.restricted(P.support() & ~s1);
      for_each_subset(r, b, [&](uint64_t m2) {
        const uint64_t s2 = scatter(m2, spp);
        const PauliOp q2 = Pp.restricted(s2), r2 = Pp.restricted(Pp.support() & ~s2);
        for_each_subset(static_cast<int>(free.size()), s, [&](uint64_t tm) {
          const auto tsites = pick(tm, free);
          for (uint64_t code = 0; code < letters; ++code) {
            const PauliOp W = letters_on(2 * n, tsites, code);
            const uint64_t wx1 = W.x & lowmask, wz1 = W.z & lowmask, wx2 = W.x >> n, wz2 = W.z >> n;
            const PauliOp Q1(n, q1.x | wx1, q1.z | wz1), Q2(n, q2.x | wx2, q2.z | wz2);
            const PauliOp R1(n, r1.x | wx1, r1.z | wz1), R2(n, r2.x | wx2, r2.z | wz2);
            const PauliOp Q(2 * n, Q1.x | (Q2.x << n), Q1.z | (Q2.z << n));
            const PauliOp R(2 * n, R1.x | (R2.x << n), R1.z | (R2.z << n));
            f(Q, R, commutes(Q2, P));
          }
        });
      });
    });
  }
}

}  // namespace

PairCount count_pair(const PauliOp& P, const PauliOp& Pp, int ell) {
  PairCount pc;
  enumerate_pair(P, Pp, ell, [&](const PauliOp&, const PauliOp&, bool comm) { ++(comm ? pc.comm : pc.anti); });
  return pc;
}

void OddKikuchiGraph::recompute_degrees() {
  degrees.assign(N, 0.0);
  double total = 0.0;
  for (const auto& e : edges) {
    degrees[e.from] += 0.5 * std::abs(e.w);
    degrees[e.to] += 0.5 * std::abs(e.w);
    total += std::abs(e.w);
  }
  d = ExactRatio{total, N};
}

OddKikuchiGraph build_odd(const BipartiteDecomposition& dec, int t, const Instance& inst, int ell,
                          uint64_t max_vertices) {
  const int n = inst.n, k = inst.k;
  if (t < 1 || t > k) throw DomainError("need 1 <= t <= k");
  if (ell < k - t) throw DomainError("infeasible level: ell < k - t");
  if (2 * n > kMaxSites) throw DimensionError("odd Kikuchi graphs need 2n <= 64");
  const auto slice = dec.slice(t);
  if (slice.empty()) throw DomainError("empty decomposition slice");
  const SliceIndex idx(2 * n, ell);
  if (idx.size() > max_vertices || idx.size() > UINT32_MAX)
    throw ResourceError("odd Kikuchi graph has " + std::to_string(idx.size()) + " vertices, above the cap");

  OddKikuchiGraph g;
  g.n = n;
  g.k = k;
  g.t = t;
  g.ell = ell;
  g.N = idx.size();
  const uint64_t twice = twice_delta_t(n, k, t, ell);
  g.delta_t = 0.5 * static_cast<double>(twice);
  for (size_t bi : slice) {
    const auto& b = dec.buckets[bi];
    const uint64_t ustrip = ~b.U.support();
    for (auto c1 : b.ids) {
      for (auto c2 : b.ids) {
        if (c1 == c2) continue;
        const auto& C = inst.constraints[c1];
        const auto& Cp = inst.constraints[c2];
        if (!subsumes(b.U, C.pauli) || !subsumes(b.U, Cp.pauli))
          throw std::logic_error("bucket center does not subsume its constraint");
        const PauliOp P = C.pauli.restricted(ustrip), Pp = Cp.pauli.restricted(ustrip);
        EdgeType ty;
        ty.bucket = static_cast<uint32_t>(bi);
        ty.c1 = c1;
        ty.c2 = c2;
        const auto first = g.edges.size();
        const auto type_id = static_cast<uint32_t>(g.types.size());
        enumerate_pair(P, Pp, ell, [&](const PauliOp& Q, const PauliOp& R, bool comm) {
          if (!comm) {
            ++ty.anti;
            return;
          }
          ++ty.comm;
          g.edges.push_back(OddEdge{static_cast<uint32_t>(idx.rank(Q)), static_cast<uint32_t>(idx.rank(R)), type_id, 0.0});
        });
        if (ty.comm + ty.anti != twice) throw std::logic_error("odd pair count differs from 2 Delta^(t)");
        if (ty.comm == 0) {
          // Every pair anticommutes, so the matrix cannot carry this term; the caller bounds it by |b b'|.
          g.unrepresented += std::abs(C.coeff * Cp.coeff);
          g.types.push_back(ty);
          continue;
        }
        ty.rho = 0.5 * static_cast<double>(ty.comm + ty.anti) / static_cast<double>(ty.comm);
        ty.kept = ty.comm;
        ty.unit = ty.rho;
        const double w = ty.rho * C.coeff * Cp.coeff;
        for (auto i = first; i < g.edges.size(); ++i) g.edges[i].w = w;
        g.types.push_back(ty);
      }
    }
  }
  std::sort(g.edges.begin(), g.edges.end(), [](const OddEdge& a, const OddEdge& b) {
    return std::tie(a.from, a.to, a.type) < std::tie(b.from, b.to, b.type);
  });
  g.recompute_degrees();
  return g;
}

Eigen::SparseMatrix<double> signed_matrix(const OddKikuchiGraph& g) {
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(2 * g.edges.size());
  for (const auto& e : g.edges) {
    t.emplace_back(e.from, e.to, 0.5 * e.w);
    t.emplace_back(e.to, e.from, 0.5 * e.w);
  }
  Eigen::SparseMatrix<double> m(static_cast<Eigen::Index>(g.N), static_cast<Eigen::Index>(g.N));
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

Regularizer regularize(const OddKikuchiGraph& g) {
  if (g.edges.empty()) throw DomainError("degenerate regularizer: graph has no edges");
  Regularizer r;
  const double d = g.d.value();
  r.gamma.resize(g.N);
  for (uint64_t q = 0; q < g.N; ++q) {
    r.gamma[q] = g.degrees[q] + d;
    r.trace += r.gamma[q];
  }
  return r;
}

Eigen::SparseMatrix<double> normalized_matrix(const OddKikuchiGraph& g, const Regularizer& r) {
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(2 * g.edges.size());
  for (const auto& e : g.edges) {
    const double v = 0.5 * e.w / std::sqrt(r.gamma[e.from] * r.gamma[e.to]);
    t.emplace_back(e.from, e.to, v);
    t.emplace_back(e.to, e.from, v);
  }
  Eigen::SparseMatrix<double> m(static_cast<Eigen::Index>(g.N), static_cast<Eigen::Index>(g.N));
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

std::string dump(const OddKikuchiGraph& g) {
  std::ostringstream out;
  out << "KIKUCHI v1 " << g.n << ' ' << g.k << ' ' << g.ell << ' ' << g.N << ' ' << g.edges.size() << '\n';
  for (const auto& e : g.edges) {
    const auto& ty = g.types[e.type];
    out << e.from << ' ' << e.to << ' ' << e.type << ' ' << format_double(e.w) << ' ' << ty.c1 << ',' << ty.c2 << '\n';
  }
  return out.str();
}

namespace {

struct IncidentKey {
  uint32_t q, c;
  uint8_t b;
  uint32_t partner;
  uint32_t edge;
};

std::vector<IncidentKey> incident_keys(const OddKikuchiGraph& g, const std::vector<char>* alive) {
  std::vector<IncidentKey> keys;
  keys.reserve(4 * g.edges.size());
  for (uint32_t i = 0; i < g.edges.size(); ++i) {
    if (alive && !(*alive)[i]) continue;
    const auto& e = g.edges[i];
    const auto& ty = g.types[e.type];
    for (uint32_t q : {e.from, e.to}) {
      keys.push_back({q, ty.c1, 0, ty.c2, i});
      keys.push_back({q, ty.c2, 1, ty.c1, i});
    }
    if (e.from == e.to) {  // a self-loop is incident once
      keys.pop_back();
      keys.pop_back();
    }
  }
  std::sort(keys.begin(), keys.end(), [](const IncidentKey& a, const IncidentKey& b) {
    return std::tie(a.q, a.c, a.b, a.partner, a.edge) < std::tie(b.q, b.c, b.b, b.partner, b.edge);
  });
  return keys;
}

}  // namespace

uint32_t LocalDegreeTable::at(uint32_t q, uint32_t c, uint8_t b) const {
  auto it = std::lower_bound(entries.begin(), entries.end(), LocalDegree{q, c, b, 0},
                             [](const LocalDegree& x, const LocalDegree& y) {
                               return std::tie(x.q, x.c, x.b) < std::tie(y.q, y.c, y.b);
                             });
  if (it != entries.end() && it->q == q && it->c == c && it->b == b) return it->count;
  return 0;
}

LocalDegreeTable local_degrees(const OddKikuchiGraph& g) {
  LocalDegreeTable tab;
  const auto keys = incident_keys(g, nullptr);
  for (size_t i = 0; i < keys.size();) {
    size_t j = i;
    uint32_t distinct = 0;
    while (j < keys.size() && keys[j].q == keys[i].q && keys[j].c == keys[i].c && keys[j].b == keys[i].b) {
      if (j == i || keys[j].partner != keys[j - 1].partner) ++distinct;
      ++j;
    }
    tab.entries.push_back({keys[i].q, keys[i].c, keys[i].b, distinct});
    tab.max = std::max(tab.max, distinct);
    i = j;
  }
  return tab;
}

uint64_t default_eta(int k, double eps, double D) {
  const double v = 8.0 * std::pow(D, k) * k * k * k / (eps * eps);
  return static_cast<uint64_t>(std::ceil(v - 1e-9 * v));
}

EdgeDeletion edge_delete(const OddKikuchiGraph& g, uint64_t eta) {
  if (eta < 1) throw DomainError("eta must be at least 1");
  EdgeDeletion out;
  out.eta = eta;
  std::vector<char> alive(g.edges.size(), 1);

  // Pass over (Q, C, b) entries in canonical order; drop the lowest partners of over-eta entries.
  // Deletions only lower other entries, so each entry is judged on its live count.
  const auto keys = incident_keys(g, nullptr);
  for (size_t i = 0; i < keys.size();) {
    size_t j = i;
    while (j < keys.size() && keys[j].q == keys[i].q && keys[j].c == keys[i].c && keys[j].b == keys[i].b) ++j;
    std::vector<uint32_t> partners;  // distinct live partners, ascending
    for (size_t x = i; x < j; ++x)
      if (alive[keys[x].edge] && (partners.empty() || partners.back() != keys[x].partner))
        partners.push_back(keys[x].partner);
    if (partners.size() > eta) {
      const size_t drop = partners.size() - eta;
      for (size_t x = i; x < j; ++x) {
        if (keys[x].partner > partners[drop - 1]) break;
        if (alive[keys[x].edge]) {
          alive[keys[x].edge] = 0;
          ++out.deleted_local;
        }
      }
    }
    i = j;
  }

  // Equalize: every type keeps ceil((1 - gamma) |Comm|) edges.
  std::vector<uint64_t> lost(g.types.size(), 0);
  for (size_t i = 0; i < g.edges.size(); ++i)
    if (!alive[i]) ++lost[g.edges[i].type];
  uint64_t gl = 0, gt = 1;
  for (size_t ty = 0; ty < g.types.size(); ++ty)
    if (g.types[ty].comm && lost[ty] * gt > gl * g.types[ty].comm) {
      gl = lost[ty];
      gt = g.types[ty].comm;
    }
  out.gamma = static_cast<double>(gl) / static_cast<double>(gt);

  OddKikuchiGraph h = g;
  h.gamma = out.gamma;
  std::vector<uint64_t> keep(g.types.size());
  for (size_t ty = 0; ty < g.types.size(); ++ty) {
    const auto c = static_cast<unsigned __int128>(g.types[ty].comm);
    keep[ty] = static_cast<uint64_t>(((gt - gl) * c + gt - 1) / gt);
  }
  std::vector<uint64_t> have(g.types.size(), 0);
  for (size_t i = 0; i < g.edges.size(); ++i)
    if (alive[i]) ++have[g.edges[i].type];
  for (size_t i = 0; i < g.edges.size(); ++i) {
    const auto ty = g.edges[i].type;
    if (alive[i] && have[ty] > keep[ty]) {
      alive[i] = 0;
      --have[ty];
      ++out.deleted_equalize;
    }
  }
  h.edges.clear();
  for (size_t ty = 0; ty < h.types.size(); ++ty) {
    auto& t = h.types[ty];
    t.kept = keep[ty];
    t.unit = keep[ty] ? (1.0 - out.gamma) * g.delta_t / static_cast<double>(keep[ty]) : 0.0;
  }
  for (size_t i = 0; i < g.edges.size(); ++i) {
    if (!alive[i]) continue;
    OddEdge e = g.edges[i];
    const double sign = e.w < 0 ? -1.0 : 1.0;
    const double mag = std::abs(e.w) / g.types[e.type].unit;  // |b b'|
    e.w = sign * mag * h.types[e.type].unit;
    h.edges.push_back(e);
  }
  h.recompute_degrees();
  out.graph = std::move(h);
  return out;
}

CSOperator cs_operator(const BipartiteDecomposition& dec, int t, const Instance& inst) {
  CSOperator op;
  op.t = t;
  const auto slice = dec.slice(t);
  op.num_buckets = slice.size();
  for (size_t bi : slice) {
    const auto& b = dec.buckets[bi];
    for (auto c : b.ids) {
      const auto& C = inst.constraints[c];
      op.ids.push_back(c);
      op.reduced.push_back(C.pauli.restricted(~b.U.support()));
      op.bucket_of.push_back(static_cast<uint32_t>(bi));
      op.sum_b2 += C.coeff * C.coeff;
    }
  }
  op.num_constraints = op.ids.size();
  const double H = static_cast<double>(inst.size());
  const double k = inst.k;
  if (H > 0) {
    op.scale = k * k * static_cast<double>(op.num_buckets) / (4.0 * H * H);
    op.constant_term = k * k * static_cast<double>(op.num_buckets) / (H * H) * op.sum_b2;
  }
  return op;
}

}  // namespace hkxor
