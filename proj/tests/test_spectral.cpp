#include <random>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "hkxor/kikuchi_odd.hpp"
#include "hkxor/oracle.hpp"
#include "hkxor/spectral.hpp"

using namespace hkxor;

namespace {

Eigen::SparseMatrix<double> random_symmetric(int N, int per_row, uint64_t seed) {
  std::mt19937_64 g(seed);
  std::uniform_int_distribution<int> col(0, N - 1);
  std::normal_distribution<double> val;
  std::vector<Eigen::Triplet<double>> t;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < per_row; ++j) {
      const int c = col(g);
      const double v = val(g);
      t.emplace_back(i, c, v);
      t.emplace_back(c, i, v);
    }
  Eigen::SparseMatrix<double> m(N, N);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

double dense_abs_max(const Eigen::SparseMatrix<double>& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es{Eigen::MatrixXd(m)};
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

Instance gen(int n, int k, size_t m, uint64_t seed, Model model = Model::RademacherSemirandom) {
  GeneratorConfig cfg;
  cfg.n = n;
  cfg.k = k;
  cfg.m = m;
  cfg.seed = seed;
  cfg.model = model;
  return generate(cfg);
}

}  // namespace

TEST_CASE("trivial spectra") {
  Eigen::SparseMatrix<double> id(1000, 1000);
  id.setIdentity();
  const auto r = spectral_norm(id);
  CHECK(r.method == "lanczos");
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-9));
  Eigen::SparseMatrix<double> d(3, 3);
  d.insert(0, 0) = 1;
  d.insert(1, 1) = 2;
  d.insert(2, 2) = 3;
  CHECK(spectral_norm(d).value == doctest::Approx(3.0).epsilon(1e-12));
  Eigen::SparseMatrix<double> z(5, 5);
  CHECK(spectral_norm(z).value == 0.0);
}

TEST_CASE("non-symmetric input is rejected") {
  Eigen::SparseMatrix<double> m(2, 2);
  m.insert(0, 1) = 1.0;
  CHECK_THROWS_AS(spectral_norm(m), DomainError);
}

TEST_CASE("lanczos agrees with a dense solve and with the negated matrix") {
  for (uint64_t seed = 1; seed <= 3; ++seed) {
    const auto m = random_symmetric(900, 4, seed);
    const double ref = dense_abs_max(m);
    SolverOptions so;
    so.tol = 1e-10;
    so.dense_limit = 0;
    const auto r = spectral_norm(m, so);
    CHECK(r.value == doctest::Approx(ref).epsilon(1e-8));
    const Eigen::SparseMatrix<double> neg = -m;
    CHECK(spectral_norm(neg, so).value == doctest::Approx(r.value).epsilon(1e-8));
  }
}

TEST_CASE("single-constraint Kikuchi norm matches dense") {
  Instance inst;
  inst.n = 2;
  inst.k = 2;
  inst.add(parse_pauli("ZZ", 2), 1.0);
  const KikuchiGraph g = build_even(inst, 1);
  const auto a = normalized_matrix(g, regularize(g));
  SolverOptions so;
  so.dense_limit = 0;
  so.tol = 1e-12;
  CHECK(spectral_norm(a, so).value == doctest::Approx(dense_abs_max(a)).epsilon(1e-10));
}

TEST_CASE("non-convergence carries the best estimate") {
  const auto m = random_symmetric(2000, 6, 9);
  SolverOptions so;
  so.dense_limit = 0;
  so.krylov = 3;
  so.max_restarts = 0;
  so.tol = 1e-14;
  try {
    spectral_norm(m, so);
    FAIL("expected non-convergence");
  } catch (const NonConvergence& e) {
    CHECK(e.best.value > 0.0);
    CHECK(e.best.residual > 0.0);
  }
}

TEST_CASE("empty instances certify one half") {
  Instance even;
  even.n = 4;
  even.k = 2;
  CHECK(certify(even, 1, 0.5, 1e-6, Branch::Auto).algval == 0.5);
  Instance odd;
  odd.n = 4;
  odd.k = 3;
  CHECK(certify(odd, 2, 0.5, 1e-6, Branch::Auto).algval == 0.5);
}

TEST_CASE("branch dispatch") {
  const Instance inst = gen(6, 3, 5, 1);
  CHECK_THROWS_AS(certify(inst, 2, 0.5, 1e-6, Branch::Even), DomainError);
  CHECK(certify(inst, 2, 0.5, 1e-6, Branch::Auto).branch == "odd");
  CHECK(parse_branch("odd") == Branch::Odd);
  CHECK_THROWS(parse_branch("sideways"));
}

TEST_CASE("one odd constraint") {
  Instance inst;
  inst.n = 4;
  inst.k = 3;
  inst.add(parse_pauli("XYZI", 4), 1.0);
  const Certificate c = certify_odd(inst, 2, 0.5, 1e-6);
  REQUIRE(c.per_t.size() == 1);
  CHECK(c.per_t[0].t == 1);
  CHECK(c.per_t[0].edges == 0);
  CHECK(c.algval == doctest::Approx(0.5 + std::sqrt(c.per_t[0].constant_term) / 3.0));
  const double lmax = lambda_max(assemble(inst));
  CHECK(lmax == doctest::Approx(1.0));
  CHECK(c.algval >= lmax);
}

TEST_CASE("certificates dominate the exact maximum eigenvalue") {
  for (uint64_t seed = 1; seed <= 6; ++seed) {
    const Model model = seed % 3 == 0 ? Model::Random : seed % 3 == 1 ? Model::GaussianSemirandom : Model::RademacherSemirandom;
    const Instance e = gen(6, 2, 12, seed, model);
    const Instance o = gen(6, 3, 12, seed, model);
    const double le = lambda_max(assemble(e)), lo = lambda_max(assemble(o));
    CHECK(certify(e, 2, 0.5, 1e-6, Branch::Auto).algval >= le - 1e-9);
    CHECK(certify(o, 2, 0.5, 1e-6, Branch::Auto).algval >= lo - 1e-9);
  }
}

TEST_CASE("certificates are deterministic") {
  const Instance inst = gen(8, 4, 30, 5);
  Certificate a = certify_even(inst, 2, 1e-6), b = certify_even(inst, 2, 1e-6);
  a.seconds = b.seconds = 0.0;
  CHECK(to_report(a) == to_report(b));
  CHECK(to_report(a).find("algval=") == 0);
}

TEST_CASE("trace moment at r = 1") {
  const Instance inst = gen(6, 2, 8, 3);
  const KikuchiGraph g = build_even(inst, 2);
  const Regularizer r = regularize(g);
  double ref = 0.0;
  for (const auto& e : g.edges) ref += e.w * e.w / (r.gamma[e.row] * r.gamma[e.col]);
  const TraceMoment tm = trace_moment(g, r, 1);
  CHECK(tm.value == doctest::Approx(ref).epsilon(1e-12));
  const auto a = normalized_matrix(g, r);
  const Eigen::MatrixXd d(a);
  CHECK(trace_moment(g, r, 2).value == doctest::Approx((d * d * d * d).trace()).epsilon(1e-10));
  CHECK_THROWS_AS(trace_moment(g, r, 3, 10), ResourceError);
}
