// Non-commutative SoS witnesses: max-entropy pseudo-expectations, expansion, positivity, lifting.
#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include <boost/rational.hpp>

#include "hkxor/instance.hpp"

namespace hkxor {

struct DerivationStep {
  PauliOp word;
  std::complex<double> value;
  int axiom = -1;  // constraint id, or -1
  int left = -1, right = -1;  // earlier step indices when derived as left^dagger * right
};

struct Derivation {
  std::vector<DerivationStep> steps;  // last step is the target
  std::vector<uint32_t> ids;          // constraint ids used an odd number of times
  size_t width() const { return ids.size(); }
};

struct PseudoExpectation {
  int n = 0;
  int d = 0;
  bool experimental = false;  // built from a non-one-basis instance
  std::unordered_map<PauliOp, std::complex<double>, PauliHash> values;

  // Provenance: axiom id or the pair (Q, R) whose product produced the word.
  struct Origin {
    int axiom = -1;
    PauliOp left, right;
    std::vector<uint32_t> ids;
  };
  std::unordered_map<PauliOp, Origin, PauliHash> origin;

  std::complex<double> value(const PauliOp& p) const;
  // pE[c P] for a phased word.
  std::complex<double> value(const PhasedPauli& p) const;
  Derivation derivation(const PauliOp& p) const;
  std::vector<PauliOp> assigned_words() const;  // canonical order
};

struct Contradiction {
  PauliOp word;
  std::complex<double> existing, derived;
  Derivation first, second;
  std::vector<uint32_t> ids;  // symmetric difference of both derivations' id sets
};

using BuildResult = std::variant<PseudoExpectation, Contradiction>;

BuildResult max_entropy_build(const Instance& inst, int d, size_t max_words = 2'000'000);

double value_of_hamiltonian(const PseudoExpectation& pe, const Instance& inst);

struct PositivityReport {
  double min_eigenvalue = 0.0;
  bool pass = false;
  size_t size = 0;
};

inline constexpr size_t kMomentMatrixCap = 5000;

PositivityReport positivity_check(const PseudoExpectation& pe, int d);

struct ExpansionReport {
  double beta = 0.0;
  int d = 0;
  bool pass = true;
  bool exhaustive = true;
  std::vector<uint32_t> witness;  // minimal violating subset
  int boundary = 0;               // |xor| of the witness
  uint64_t subsets_checked = 0;
};

ExpansionReport boundary_expansion_check(const std::vector<uint64_t>& edges, double beta, int d,
                                         uint64_t samples = 200000, uint64_t seed = 1);
ExpansionReport boundary_expansion_check(const Instance& inst, double beta, int d);

// min |xor_{C in S} C| over subsets of each size s = 1..d (index s); -1 when no subset has that size.
std::vector<int> expansion_profile(const std::vector<uint64_t>& edges, int d);

std::vector<uint64_t> hyperedges(const Instance& inst);

std::vector<std::pair<uint32_t, uint32_t>> anticommuting_obstruction(const Instance& inst);

// Classical moments pE_mu[x_S] keyed by support mask.
using MomentTable = std::map<uint64_t, double>;

MomentTable moments_from_distribution(int n, const std::vector<std::pair<std::vector<int>, double>>& dist, int d);
// One-basis Z Hamiltonian H_J on the supports of a classical instance.
Instance lifted_hamiltonian(const Instance& inst);
PseudoExpectation lift_classical(const Instance& inst, const MomentTable& mu, int d);
double classical_pseudo_value(const Instance& inst, const MomentTable& mu);

// Exact Gaussian rationals for the anticommutation computation.
struct GaussRational {
  boost::rational<long long> re{0}, im{0};
  GaussRational() = default;
  GaussRational(boost::rational<long long> r, boost::rational<long long> i = 0) : re(r), im(i) {}
  static GaussRational ipow(int p);
  GaussRational conj() const { return {re, -im}; }
  bool is_zero() const { return re.numerator() == 0 && im.numerator() == 0; }
  friend GaussRational operator+(const GaussRational& a, const GaussRational& b) { return {a.re + b.re, a.im + b.im}; }
  friend GaussRational operator*(const GaussRational& a, const GaussRational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend bool operator==(const GaussRational& a, const GaussRational& b) { return a.re == b.re && a.im == b.im; }
};

using ExactOperator = std::map<std::pair<uint64_t, uint64_t>, GaussRational>;  // (x, z) -> coefficient

ExactOperator exact_product(const ExactOperator& a, const ExactOperator& b, int n);
ExactOperator exact_adjoint(const ExactOperator& a);

struct ObstructionValue {
  ExactOperator hdagger_h;  // reduced H^dagger H
  GaussRational value;      // pE[H^dagger H]
};

// H = (-P + Q + PQ)/3 for anticommuting P, Q; evaluated with pE[Id] = pE[P] = pE[Q] = 1.
ObstructionValue anticommuting_value(const PauliOp& p, const PauliOp& q);

std::string dump(const PseudoExpectation& pe);
std::string dump(const Contradiction& c);

}  // namespace hkxor
