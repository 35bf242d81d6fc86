#include <random>
#include <set>

#include "doctest.h"
#include "hkxor/kikuchi_odd.hpp"
#include "odd_fixtures.hpp"

using namespace hkxor;

namespace {

PauliOp random_weight(std::mt19937_64& g, int n, int w) {
  std::vector<int> sites(n);
  for (int i = 0; i < n; ++i) sites[i] = i;
  std::shuffle(sites.begin(), sites.end(), g);
  PauliOp p = PauliOp::identity(n);
  for (int j = 0; j < w; ++j) p.set(sites[j], "XYZ"[g() % 3]);
  return p;
}

// Full N^2 scan over Q_l using the independent predicate.
PairCount scan_pair(const PauliOp& P, const PauliOp& Pp, int ell) {
  const auto words = enumerate_slice(2 * P.n, ell);
  PairCount pc;
  for (const auto& Q : words)
    for (const auto& R : words) {
      const int c = odd_fixtures::classify(P, Pp, Q, R);
      if (c == 1) ++pc.comm;
      if (c == 2) ++pc.anti;
    }
  return pc;
}

Instance with_words(int n, const std::vector<std::pair<std::string, double>>& ws) {
  Instance inst;
  inst.n = n;
  inst.k = parse_pauli(ws.front().first, n).weight();
  for (const auto& [w, b] : ws) inst.add(parse_pauli(w, n), b);
  return inst;
}

}  // namespace

TEST_CASE("tau thresholds") {
  // k = 3, t = 3: exponent k/2 - t < 0 so the max picks 1 and tau = 4 k^2 / eps^2.
  CHECK(tau_threshold(10, 3, 2, 1.0, 3) == 36);
  CHECK(tau_threshold(10, 3, 2, 0.5, 3) == 144);
  CHECK(tau_threshold(5, 3, 2, 1.0, 1) == 99);
}

TEST_CASE("repeated word forms a t = k bucket") {
  std::vector<std::pair<std::string, double>> ws(40, {"XYZIII", 1.0});
  ws.push_back({"IIIZZZ", -1.0});
  const Instance inst = with_words(6, ws);
  const auto dec = regularity_decompose(inst, 2, 1.0);
  REQUIRE(dec.buckets.size() >= 2);
  CHECK(dec.buckets[0].t == 3);
  CHECK(dec.buckets[0].U == parse_pauli("XYZIII", 6));
  CHECK(dec.buckets[0].ids.size() == 36);
  for (uint32_t i = 0; i < 36; ++i) CHECK(dec.buckets[0].ids[i] == i);
}

TEST_CASE("disjoint supports land in singleton residual buckets") {
  const Instance inst = with_words(9, {{"ZZZIIIIII", 1}, {"IIIXXXIII", -1}, {"IIIIIIYYY", 1}});
  const auto dec = regularity_decompose(inst, 2, 0.5);
  REQUIRE(dec.buckets.size() == 3);
  for (const auto& b : dec.buckets) {
    CHECK(b.t == 1);
    CHECK(b.residual);
    CHECK(b.ids.size() == 1);
    CHECK(b.U.weight() == 1);
  }
  CHECK(dec.size_warning);
}

TEST_CASE("decomposition is a partition and is regular at eps / 2k") {
  for (uint64_t seed = 1; seed <= 5; ++seed) {
    const Instance inst = odd_fixtures::compliant(seed);
    const double eps = 1.0;
    const auto dec = regularity_decompose(inst, 2, eps);
    std::vector<int> seen(inst.size(), 0);
    for (const auto& b : dec.buckets)
      for (auto id : b.ids) {
        ++seen[id];
        CHECK(subsumes(b.U, inst.constraints[id].pauli));
      }
    for (int s : seen) CHECK(s == 1);
    CHECK(regularity_check(dec, inst, eps / (2 * inst.k), 2).pass);
  }
}

TEST_CASE("regularity check finds a planted dense sub-word") {
  // One bucket keyed by Z1 holding many copies of Z1 Z2 Z3.
  const Instance inst = with_words(6, std::vector<std::pair<std::string, double>>(20, {"ZZZIII", 1.0}));
  BipartiteDecomposition dec;
  dec.n = 6;
  dec.k = 3;
  dec.ell = 2;
  Bucket b;
  b.t = 1;
  b.U = parse_pauli("Z1", 6);
  for (uint32_t i = 0; i < 20; ++i) b.ids.push_back(i);
  dec.buckets.push_back(b);
  const auto rep = regularity_check(dec, inst, 1.0, 2);
  CHECK_FALSE(rep.pass);
  CHECK(rep.witness.weight() >= 2);
  CHECK(subsumes(rep.witness, parse_pauli("ZZZIII", 6)));
  BipartiteDecomposition empty;
  CHECK(regularity_check(empty, inst, 1.0, 2).pass);
}

TEST_CASE("pair counts match a full scan and give 2 Delta^(t)") {
  std::mt19937_64 g(13);
  for (int n = 2; n <= 3; ++n)
    for (int r = 0; r <= n; ++r)
      for (int ell = std::max(r, 1); ell <= 3; ++ell) {
        for (int rep = 0; rep < 3; ++rep) {
          const PauliOp P = random_weight(g, n, r), Pp = random_weight(g, n, r);
          const PairCount fast = count_pair(P, Pp, ell), slow = scan_pair(P, Pp, ell);
          CHECK(fast.comm == slow.comm);
          CHECK(fast.anti == slow.anti);
          // k - t = r, so pick k = r + 1, t = 1.
          CHECK(fast.comm + fast.anti == twice_delta_t(n, r + 1, 1, ell));
          if (fast.comm) CHECK(fast.rho() >= 0.5);
          if (fast.anti == 0 && fast.comm) CHECK(fast.rho() == 0.5);
        }
      }
}

TEST_CASE("swapping Q and R keeps the sign, so Commuting can be empty") {
  const PauliOp P = parse_pauli("XZ", 2), Pp = parse_pauli("ZX", 2);
  const auto words = enumerate_slice(4, 2);
  for (const auto& Q : words)
    for (const auto& R : words) CHECK(odd_fixtures::classify(P, Pp, Q, R) == odd_fixtures::classify(P, Pp, R, Q));
  const PairCount pc = count_pair(P, Pp, 2);
  CHECK(pc.comm == 0);
  CHECK(pc.anti == 4);
  // XX against XX commutes everywhere.
  const PairCount same = count_pair(parse_pauli("XX", 2), parse_pauli("XX", 2), 2);
  CHECK(same.anti == 0);
  CHECK(same.rho() == 0.5);
}

TEST_CASE("pairs without commuting edges are tallied, not dropped") {
  const Instance inst = with_words(3, {{"ZXZ", 1}, {"ZZX", -1}});
  BipartiteDecomposition dec;
  dec.n = 3;
  dec.k = 3;
  dec.ell = 2;
  dec.buckets.push_back(Bucket{1, parse_pauli("Z1", 3), {0, 1}, false});
  const OddKikuchiGraph g = build_odd(dec, 1, inst, 2);
  CHECK(g.edges.empty());
  CHECK(g.unrepresented == 2.0);
  REQUIRE(g.types.size() == 2);
  CHECK(g.types[0].comm == 0);
}

TEST_CASE("odd graph edges satisfy the defining conditions") {
  const Instance inst = odd_fixtures::compliant(3, 4, 300);
  const auto dec = regularity_decompose(inst, 2, 1.0);
  for (int t = 1; t <= 3; ++t) {
    if (dec.slice(t).empty()) continue;
    const OddKikuchiGraph g = build_odd(dec, t, inst, 2);
    const SliceIndex idx(2 * inst.n, 2);
    std::vector<uint64_t> per_type(g.types.size(), 0);
    for (const auto& e : g.edges) {
      const auto& ty = g.types[e.type];
      const auto& U = dec.buckets[ty.bucket].U;
      const PauliOp P = inst.constraints[ty.c1].pauli.restricted(~U.support());
      const PauliOp Pp = inst.constraints[ty.c2].pauli.restricted(~U.support());
      REQUIRE(odd_fixtures::classify(P, Pp, idx.unrank(e.from), idx.unrank(e.to)) == 1);
      CHECK(e.w == doctest::Approx(ty.rho * inst.constraints[ty.c1].coeff * inst.constraints[ty.c2].coeff));
      ++per_type[e.type];
    }
    for (size_t i = 0; i < g.types.size(); ++i) {
      CHECK(per_type[i] == g.types[i].comm);
      CHECK(g.types[i].comm + g.types[i].anti == twice_delta_t(inst.n, 3, t, 2));
    }
    const auto a = signed_matrix(g);
    CHECK((a - Eigen::SparseMatrix<double>(a.transpose())).norm() == 0.0);
  }
}

TEST_CASE("infeasible level") {
  const Instance inst = odd_fixtures::compliant(1, 4, 50);
  const auto dec = regularity_decompose(inst, 2, 1.0);
  REQUIRE_FALSE(dec.slice(1).empty());
  CHECK_THROWS_AS(build_odd(dec, 1, inst, 1), DomainError);
}

TEST_CASE("local degrees with a single pair") {
  const Instance inst = with_words(4, {{"ZZXI", 1}, {"ZXIY", -1}});
  BipartiteDecomposition dec;
  dec.n = 4;
  dec.k = 3;
  dec.ell = 2;
  dec.buckets.push_back(Bucket{1, parse_pauli("Z1", 4), {0, 1}, false});
  const OddKikuchiGraph g = build_odd(dec, 1, inst, 2);
  REQUIRE_FALSE(g.edges.empty());
  const auto tab = local_degrees(g);
  CHECK(tab.max == 1);
  for (const auto& e : tab.entries) CHECK(e.count <= 1);
  const EdgeDeletion del = edge_delete(g, 1);
  CHECK(del.gamma == 0.0);
  CHECK(del.graph.edges.size() == g.edges.size());
  for (size_t i = 0; i < g.edges.size(); ++i) CHECK(del.graph.edges[i].w == doctest::Approx(g.edges[i].w));
}

TEST_CASE("edge deletion bounds local degree and equalizes types") {
  const Instance inst = odd_fixtures::compliant(7);
  const auto dec = regularity_decompose(inst, 2, 1.0);
  const OddKikuchiGraph g = build_odd(dec, 1, inst, 2);
  const auto before = local_degrees(g);
  REQUIRE(before.max > 2);
  const uint64_t eta = before.max / 2;
  const EdgeDeletion del = edge_delete(g, eta);
  CHECK(local_degrees(del.graph).max <= eta);
  CHECK(del.gamma > 0.0);
  CHECK(del.gamma <= 1.0);
  std::vector<uint64_t> kept(g.types.size(), 0);
  for (const auto& e : del.graph.edges) ++kept[e.type];
  for (size_t i = 0; i < g.types.size(); ++i) {
    const double want = std::ceil((1.0 - del.gamma) * static_cast<double>(g.types[i].comm) - 1e-9);
    CHECK(static_cast<double>(kept[i]) == want);
    CHECK(kept[i] == del.graph.types[i].kept);
  }
  const auto a = signed_matrix(del.graph);
  CHECK((a - Eigen::SparseMatrix<double>(a.transpose())).norm() == 0.0);
}

TEST_CASE("cs operator sums") {
  const Instance inst = odd_fixtures::compliant(2);
  const auto dec = regularity_decompose(inst, 2, 1.0);
  size_t total = 0;
  for (int t = 1; t <= 3; ++t) {
    const CSOperator cs = cs_operator(dec, t, inst);
    CHECK(cs.sum_b2 == static_cast<double>(cs.num_constraints));
    CHECK(cs.num_constraints == dec.slice_constraints(t));
    for (size_t i = 0; i < cs.reduced.size(); ++i) CHECK(cs.reduced[i].weight() == 3 - t);
    total += cs.num_constraints;
  }
  CHECK(total == inst.size());
}

TEST_CASE("default eta") {
  CHECK(default_eta(3, 1.0) == 8 * 27 * 27);
  CHECK(default_eta(3, 0.5, 2.0) == 4 * 8 * 8 * 27);
}
