#include <random>
#include <set>

#include "dense_pauli.hpp"
#include "doctest.h"
#include "hkxor/pauli.hpp"

using namespace hkxor;
using cd = std::complex<double>;

namespace {

PauliOp random_word(std::mt19937_64& g, int n) {
  PauliOp p = PauliOp::identity(n);
  std::uniform_int_distribution<int> l(0, 3);
  for (int i = 0; i < n; ++i) {
    const int v = l(g);
    if (v) p.set(i, "XYZ"[v - 1]);
  }
  return p;
}

cd ipow(int p) {
  const cd v[4] = {1.0, cd(0, 1), -1.0, cd(0, -1)};
  return v[p & 3];
}

bool dense_product_matches(const PauliOp& a, const PauliOp& b) {
  const PhasedPauli r = multiply(a, b);
  const Eigen::MatrixXcd lhs = testing_dense::word(to_dense(a)) * testing_dense::word(to_dense(b));
  const Eigen::MatrixXcd rhs = ipow(r.phase) * testing_dense::word(to_dense(r.op));
  return (lhs - rhs).cwiseAbs().maxCoeff() < 1e-14;
}

}  // namespace

TEST_CASE("single-site products") {
  const PauliOp X = PauliOp::single(1, 0, 'X'), Z = PauliOp::single(1, 0, 'Z');
  const PhasedPauli xz = multiply(X, Z);
  CHECK(xz.op == PauliOp::single(1, 0, 'Y'));
  CHECK(xz.phase == 3);  // -i
  CHECK(xz.coefficient() == cd(0, -1));
  for (char c : {'X', 'Y', 'Z'}) {
    const PauliOp p = PauliOp::single(1, 0, c);
    CHECK(multiply(p, p) == PhasedPauli(PauliOp::identity(1), 0));
  }
}

TEST_CASE("two-site product picks up +1") {
  const PauliOp a = parse_pauli("XZ", 2), b = parse_pauli("ZX", 2);
  const PhasedPauli r = multiply(a, b);
  CHECK(to_dense(r.op) == "YY");
  CHECK(r.phase == 0);
  CHECK(dense_product_matches(a, b));
}

TEST_CASE("multiply matches dense matrices exhaustively for n <= 3") {
  for (int n = 1; n <= 3; ++n) {
    std::vector<PauliOp> all;
    for (int w = 0; w <= n; ++w)
      for (const auto& p : enumerate_slice(n, w)) all.push_back(p);
    CHECK(all.size() == (size_t{1} << (2 * n)));
    for (const auto& a : all)
      for (const auto& b : all) REQUIRE(dense_product_matches(a, b));
  }
}

TEST_CASE("multiply matches dense matrices on random n = 4 words") {
  std::mt19937_64 g(3);
  for (int i = 0; i < 3000; ++i) REQUIRE(dense_product_matches(random_word(g, 4), random_word(g, 4)));
}

TEST_CASE("group laws on random words") {
  std::mt19937_64 g(11);
  for (int i = 0; i < 2000; ++i) {
    const PauliOp a = random_word(g, 16), b = random_word(g, 16), c = random_word(g, 16);
    const PhasedPauli A(a), B(b), C(c);
    CHECK(multiply(multiply(A, B), C) == multiply(A, multiply(B, C)));
    CHECK(multiply(A, PhasedPauli(PauliOp::identity(16))) == A);
    CHECK(multiply(a, a) == PhasedPauli(PauliOp::identity(16)));
    const PhasedPauli ab = multiply(a, b), ba = multiply(b, a);
    CHECK(ab.op == ba.op);
    CHECK(commutes(a, b) == (ab.phase == ba.phase));
  }
}

TEST_CASE("commutation examples") {
  CHECK_FALSE(commutes(parse_pauli("X", 1), parse_pauli("Z", 1)));
  CHECK(commutes(parse_pauli("XZ", 2), parse_pauli("ZX", 2)));
  std::mt19937_64 g(5);
  for (int i = 0; i < 100; ++i) {
    const PauliOp p = random_word(g, 7);
    CHECK(commutes(p, PauliOp::identity(7)));
  }
}

TEST_CASE("commutes agrees with dense commutators") {
  std::mt19937_64 g(17);
  for (int i = 0; i < 500; ++i) {
    const PauliOp a = random_word(g, 3), b = random_word(g, 3);
    const Eigen::MatrixXcd A = testing_dense::word(to_dense(a)), B = testing_dense::word(to_dense(b));
    const bool dense_comm = (A * B - B * A).cwiseAbs().maxCoeff() < 1e-14;
    CHECK(commutes(a, b) == dense_comm);
  }
}

TEST_CASE("subsumes and meet") {
  CHECK(subsumes(parse_pauli("ZII", 3), parse_pauli("ZZZ", 3)));
  CHECK_FALSE(subsumes(parse_pauli("XI", 2), parse_pauli("ZZ", 2)));
  CHECK(subsumes(PauliOp::identity(3), parse_pauli("XYZ", 3)));
  CHECK(meet(parse_pauli("ZZI", 3), parse_pauli("IZZ", 3)) == std::vector<int>{1});
  CHECK(meet(parse_pauli("X", 1), parse_pauli("Z", 1)).empty());
  const PauliOp p = parse_pauli("XIYZ", 4);
  CHECK(meet(p, p) == p.sites());
}

TEST_CASE("slice enumeration") {
  CHECK(enumerate_slice(3, 2).size() == 27);
  const auto s0 = enumerate_slice(5, 0);
  REQUIRE(s0.size() == 1);
  CHECK(s0[0].is_identity());
  std::vector<std::string> got;
  for (const auto& p : enumerate_slice(2, 1)) got.push_back(to_sparse(p));
  CHECK(got == std::vector<std::string>{"X1", "Y1", "Z1", "X2", "Y2", "Z2"});
  CHECK_THROWS_AS(enumerate_slice(2, 3), DomainError);
}

TEST_CASE("rank and unrank are inverse and canonical for n <= 8, l <= 3") {
  for (int n = 0; n <= 8; ++n)
    for (int ell = 0; ell <= std::min(3, n); ++ell) {
      const SliceIndex idx(n, ell);
      CHECK(idx.size() == binomial(n, ell) * ipow3(ell));
      const auto words = enumerate_slice(n, ell);
      REQUIRE(words.size() == idx.size());
      for (uint64_t i = 0; i < idx.size(); ++i) {
        REQUIRE(idx.rank(words[i]) == i);
        REQUIRE(idx.unrank(i) == words[i]);
        if (i) REQUIRE(canonical_less(words[i - 1], words[i]));
      }
    }
}

TEST_CASE("mismatched qubit counts") {
  CHECK_THROWS_AS(multiply(PauliOp::identity(2), PauliOp::identity(3)), DimensionError);
  CHECK_THROWS_AS(commutes(PauliOp::identity(2), PauliOp::identity(3)), DimensionError);
}

TEST_CASE("text forms") {
  const PauliOp p = parse_pauli("X1 Y3 Z4", 5);
  CHECK(to_dense(p) == "XIYZI");
  CHECK(to_sparse(p) == "X1 Y3 Z4");
  CHECK(parse_pauli(to_dense(p), 5) == p);
  CHECK(to_sparse(PauliOp::identity(3)) == "I");
  CHECK_THROWS(parse_pauli("Z3 Z1", 4));
  CHECK_THROWS(parse_pauli("Q1", 4));
  CHECK_THROWS(parse_pauli("Z9", 4));
  CHECK(parse_phase(phase_string(3)) == 3);
}

TEST_CASE("dense index convention puts site 0 in the most significant bit") {
  CHECK(dense_bits(0b001, 3) == 0b100);
  CHECK(dense_bits(0b110, 3) == 0b011);
}

TEST_CASE("binomial helpers") {
  CHECK(binomial(5, 2) == 10);
  CHECK(binomial(4, 7) == 0);
  CHECK(binomial(64, 32) == 1832624140942590534ULL);
  CHECK(ipow3(4) == 81);
  CHECK_THROWS_AS(ipow3(41), DomainError);
}
