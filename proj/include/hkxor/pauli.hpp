// Pauli words in symplectic (x, z) bit-pair form, phases, and weight slices.
#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hkxor {

inline constexpr int kMaxSites = 64;

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

uint64_t binomial(int n, int k);
uint64_t ipow3(int e);
inline uint64_t site_mask(int n) { return n >= 64 ? ~uint64_t{0} : ((uint64_t{1} << n) - 1); }

// Site i is bit i of both masks. (x,z) = (0,0) I, (1,0) X, (0,1) Z, (1,1) Y.
struct PauliOp {
  int n = 0;
  uint64_t x = 0;
  uint64_t z = 0;

  PauliOp() = default;
  PauliOp(int n_, uint64_t x_, uint64_t z_);
  static PauliOp identity(int n) { return PauliOp(n, 0, 0); }
  static PauliOp single(int n, int site, char letter);

  char letter(int site) const;
  void set(int site, char letter);
  uint64_t support() const { return x | z; }
  int weight() const;
  bool is_identity() const { return (x | z) == 0; }
  // Every non-identity site carries the same letter.
  bool single_type(char* letter_out = nullptr) const;
  std::vector<int> sites() const;
  PauliOp restricted(uint64_t mask) const { return PauliOp(n, x & mask, z & mask); }

  friend bool operator==(const PauliOp& a, const PauliOp& b) {
    return a.n == b.n && a.x == b.x && a.z == b.z;
  }
  friend bool operator!=(const PauliOp& a, const PauliOp& b) { return !(a == b); }
};

struct PauliHash {
  size_t operator()(const PauliOp& p) const noexcept;
};

// Phase is i^phase.
struct PhasedPauli {
  PauliOp op;
  uint8_t phase = 0;

  PhasedPauli() = default;
  PhasedPauli(PauliOp o, int ph = 0) : op(o), phase(static_cast<uint8_t>(((ph % 4) + 4) % 4)) {}
  std::complex<double> coefficient() const;
  friend bool operator==(const PhasedPauli& a, const PhasedPauli& b) {
    return a.op == b.op && a.phase == b.phase;
  }
};

PhasedPauli multiply(const PhasedPauli& a, const PhasedPauli& b);
PhasedPauli multiply(const PauliOp& a, const PauliOp& b);
bool commutes(const PauliOp& a, const PauliOp& b);
bool subsumes(const PauliOp& u, const PauliOp& p);
std::vector<int> meet(const PauliOp& p, const PauliOp& q);

// Weight first, then sorted support lexicographically, then letters X<Y<Z from the lowest site.
bool canonical_less(const PauliOp& a, const PauliOp& b);

// Bijection P_l(n) <-> [0, 3^l C(n,l)) in canonical order.
class SliceIndex {
 public:
  SliceIndex(int n, int ell);
  int n() const { return n_; }
  int ell() const { return ell_; }
  uint64_t size() const { return size_; }
  uint64_t rank(const PauliOp& p) const;
  PauliOp unrank(uint64_t idx) const;

 private:
  int n_, ell_;
  uint64_t size_, letters_;
};

std::vector<PauliOp> enumerate_slice(int n, int ell);

// Textual forms: dense "IXZY" (site 1 first) or sparse "X1 Z3" (1-indexed).
std::string to_dense(const PauliOp& p);
std::string to_sparse(const PauliOp& p);
PauliOp parse_pauli(std::string_view text, int n);
std::string phase_string(uint8_t phase);
uint8_t parse_phase(std::string_view s);

// Index convention for dense 2^n vectors: site 0 is the most significant bit.
uint64_t dense_bits(uint64_t mask, int n);

}  // namespace hkxor
