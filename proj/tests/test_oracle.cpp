#include <random>

#include "dense_pauli.hpp"
#include "doctest.h"
#include "hkxor/oracle.hpp"

using namespace hkxor;
using cd = std::complex<double>;

namespace {

Instance from_words(int n, const std::vector<std::pair<std::string, double>>& ws) {
  Instance inst;
  inst.n = n;
  inst.k = parse_pauli(ws.front().first, n).weight();
  for (const auto& [w, b] : ws) inst.add(parse_pauli(w, n), b);
  return inst;
}

Eigen::VectorXcd random_state(std::mt19937_64& g, int n) {
  std::normal_distribution<double> nd;
  Eigen::VectorXcd v(Eigen::Index{1} << n);
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = cd(nd(g), nd(g));
  return v / v.norm();
}

Instance gen(int n, int k, size_t m, uint64_t seed, Model model) {
  GeneratorConfig cfg;
  cfg.n = n;
  cfg.k = k;
  cfg.m = m;
  cfg.seed = seed;
  cfg.model = model;
  return generate(cfg);
}

}  // namespace

TEST_CASE("assembly of small operators") {
  const DenseOperator a = assemble(PauliMap{{parse_pauli("Z", 1), 0.5}}, 1, 0.5);
  Eigen::MatrixXcd ref(2, 2);
  ref << 1, 0, 0, 0;
  CHECK((a.m - ref).cwiseAbs().maxCoeff() == 0.0);
  const DenseOperator b = assemble(from_words(2, {{"ZZ", 1.0}}));
  Eigen::MatrixXcd ref2 = Eigen::MatrixXcd::Zero(4, 4);
  ref2(0, 0) = ref2(3, 3) = 1.0;
  CHECK((b.m - ref2).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(assemble(PauliMap{}, 13), ResourceError);
}

TEST_CASE("assembly matches explicit Kronecker products") {
  const Instance inst = gen(4, 2, 6, 3, Model::Random);
  Eigen::MatrixXcd ref = 0.5 * Eigen::MatrixXcd::Identity(16, 16);
  for (const auto& c : inst.constraints) ref += c.coeff / 12.0 * testing_dense::word(to_dense(c.pauli));
  CHECK((assemble(inst).m - ref).cwiseAbs().maxCoeff() < 1e-15);
  std::mt19937_64 g(2);
  const Eigen::VectorXcd v = random_state(g, 4);
  for (const auto& c : inst.constraints)
    CHECK((apply_pauli(c.pauli, v) - testing_dense::word(to_dense(c.pauli)) * v).norm() < 1e-14);
}

TEST_CASE("Pauli components recover the coefficients") {
  const Instance inst = gen(5, 3, 7, 11, Model::GaussianSemirandom);
  const DenseOperator op = assemble(inst);
  for (const auto& c : inst.constraints) {
    double expect = 0.0;
    for (const auto& d : inst.constraints)
      if (d.pauli == c.pauli) expect += d.coeff / (2.0 * inst.size());
    CHECK(std::abs(pauli_component(op, c.pauli) - cd(expect, 0)) < 1e-14);
  }
  CHECK(std::abs(pauli_component(op, PauliOp::identity(5)) - 0.5) < 1e-14);
}

TEST_CASE("maximum eigenvalues") {
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(4, 4);
  d(0, 0) = d(3, 3) = 1.0;
  CHECK(lambda_max(d) == doctest::Approx(1.0));
  const DenseOperator xz = assemble(PauliMap{{parse_pauli("X", 1), 0.25}, {parse_pauli("Z", 1), 0.25}}, 1, 0.5);
  CHECK(lambda_max(xz) == doctest::Approx(0.5 + std::sqrt(2.0) / 4.0).epsilon(1e-14));
  Eigen::MatrixXcd nh = Eigen::MatrixXcd::Zero(2, 2);
  nh(0, 1) = 1.0;
  CHECK_THROWS_AS(lambda_max(nh), DomainError);
}

TEST_CASE("maximum eigenvalue never drops below one half") {
  for (uint64_t seed = 1; seed <= 12; ++seed) {
    const Model m = seed % 2 ? Model::Random : Model::GaussianSemirandom;
    const Instance inst = gen(4 + static_cast<int>(seed % 7), 2 + static_cast<int>(seed % 3), 15, seed, m);
    CHECK(lambda_max(assemble(inst)) >= 0.5 - 1e-12);
  }
}

TEST_CASE("quadratic form identity") {
  const Instance zz = from_words(2, {{"ZZ", 1.0}});
  Eigen::VectorXcd e0 = Eigen::VectorXcd::Zero(4);
  e0(0) = 1.0;
  const auto r0 = quadratic_form_check(zz, 1, e0);
  CHECK(std::abs(r0.lhs - cd(2, 0)) < 1e-15);
  CHECK(std::abs(r0.rhs - cd(2, 0)) < 1e-15);
  CHECK(r0.rel_error == 0.0);

  std::mt19937_64 g(7);
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    const int n = 4 + static_cast<int>(seed % 3);
    const Instance inst = gen(n, seed % 2 ? 2 : 4, 6, seed, Model::Random);
    const auto r = quadratic_form_check(inst, 2, random_state(g, n));
    CHECK(r.rel_error <= 1e-9);
  }

  Instance empty;
  empty.n = 4;
  empty.k = 2;
  const auto re = quadratic_form_check(empty, 2, random_state(g, 4));
  CHECK(re.lhs == cd(0, 0));
  CHECK(re.rhs == cd(0, 0));
  CHECK(re.rel_error == 0.0);

  CHECK_THROWS_AS(quadratic_form_check(zz, 1, Eigen::VectorXcd::Ones(4)), DomainError);
}

TEST_CASE("classical values on the 3-cycle") {
  const Instance cyc = from_words(3, {{"ZZI", 1.0}, {"IZZ", -1.0}, {"ZIZ", 1.0}});
  CHECK(classical_phi(cyc, {1, 1, 1}) == 1.0);
  CHECK(classical_value(cyc, {1, 1, 1}) == doctest::Approx(2.0 / 3.0));
  double best = -1;
  for (int a = 0; a < 8; ++a) {
    std::vector<int> x{a & 4 ? -1 : 1, a & 2 ? -1 : 1, a & 1 ? -1 : 1};
    best = std::max(best, classical_value(cyc, x));
  }
  const ClassicalMax cm = classical_max(cyc);
  CHECK(cm.value == doctest::Approx(best));
  CHECK(cm.value == doctest::Approx(2.0 / 3.0));
  CHECK(cm.argmax == std::vector<int>{1, 1, 1});
  const Instance sat = from_words(3, {{"ZZI", 1.0}, {"IZZ", 1.0}});
  CHECK(classical_value(sat, {1, 1, 1}) == 1.0);
  CHECK(classical_value(cyc, {1, -1, 1}) == classical_value(cyc, {-1, 1, -1}));
  CHECK_THROWS(classical_value(cyc, {1, 0, 1}));
}

TEST_CASE("one-basis instances have classical ground energy") {
  for (uint64_t seed = 1; seed <= 8; ++seed) {
    const Instance inst = gen(7, 2 + static_cast<int>(seed % 2), 12, seed, Model::OneBasisZ);
    CHECK(classical_max(inst).value == doctest::Approx(lambda_max(assemble(inst))).epsilon(1e-10));
  }
}

TEST_CASE("level-n spectra agree for a small Hamiltonian") {
  std::mt19937_64 g(4);
  std::normal_distribution<double> nd;
  PauliMap h;
  for (const auto& w : all_words(2))
    if (!w.is_identity() && g() % 2) h.emplace_back(w, nd(g));
  const LevelNGraph lg = build_level_n(h, 2);
  const double a = lambda_max(level_n_dense(lg));
  const double b = lambda_max(level_n_tensor_id(lg));
  const double c = lambda_max(hatted_operator(h, 2));
  CHECK(a == doctest::Approx(b).epsilon(1e-9));
  CHECK(a == doctest::Approx(c).epsilon(1e-9));
}
