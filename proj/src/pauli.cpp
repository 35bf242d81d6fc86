#include "hkxor/pauli.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <sstream>

namespace hkxor {

uint64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
    if (r > ~uint64_t{0}) throw DomainError("binomial overflow");
  }
  return static_cast<uint64_t>(r);
}

uint64_t ipow3(int e) {
  uint64_t r = 1;
  for (int i = 0; i < e; ++i) {
    if (r > ~uint64_t{0} / 3) throw DomainError("3^e overflow");
    r *= 3;
  }
  return r;
}

PauliOp::PauliOp(int n_, uint64_t x_, uint64_t z_) : n(n_), x(x_), z(z_) {
  if (n < 0 || n > kMaxSites) throw DimensionError("qubit count out of range");
  const uint64_t m = site_mask(n);
  if ((x & ~m) || (z & ~m)) throw DimensionError("mask bits beyond n");
}

PauliOp PauliOp::single(int n, int site, char letter) {
  PauliOp p = identity(n);
  p.set(site, letter);
  return p;
}

char PauliOp::letter(int site) const {
  const int xb = (x >> site) & 1, zb = (z >> site) & 1;
  return xb ? (zb ? 'Y' : 'X') : (zb ? 'Z' : 'I');
}

void PauliOp::set(int site, char letter) {
  if (site < 0 || site >= n) throw DimensionError("site out of range");
  const uint64_t b = uint64_t{1} << site;
  x &= ~b;
  z &= ~b;
  switch (std::toupper(static_cast<unsigned char>(letter))) {
    case 'I': break;
    case 'X': x |= b; break;
    case 'Z': z |= b; break;
    case 'Y': x |= b; z |= b; break;
    default: throw DomainError(std::string("bad Pauli letter '") + letter + "'");
  }
}

int PauliOp::weight() const { return std::popcount(x | z); }

bool PauliOp::single_type(char* letter_out) const {
  const uint64_t s = support();
  char l = 'I';
  if (s) {
    if ((x & z) == s) l = 'Y';
    else if (x == s && z == 0) l = 'X';
    else if (z == s && x == 0) l = 'Z';
    else return false;
  }
  if (letter_out) *letter_out = l;
  return true;
}

std::vector<int> PauliOp::sites() const {
  std::vector<int> out;
  for (uint64_t s = support(); s; s &= s - 1) out.push_back(std::countr_zero(s));
  return out;
}

size_t PauliHash::operator()(const PauliOp& p) const noexcept {
  uint64_t h = p.x * 0x9E3779B97F4A7C15ull;
  h ^= std::rotl(p.z, 29) + 0x632BE59BD9B4E019ull + (h << 6) + (h >> 2);
  h ^= static_cast<uint64_t>(p.n) << 56;
  h ^= h >> 31;
  h *= 0xBF58476D1CE4E5B9ull;
  h ^= h >> 29;
  return static_cast<size_t>(h);
}

std::complex<double> PhasedPauli::coefficient() const {
  static const std::complex<double> tab[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return tab[phase & 3];
}

namespace {
void check_dims(const PauliOp& a, const PauliOp& b) {
  if (a.n != b.n) throw DimensionError("mismatched qubit counts");
}
}  // namespace

// With P = i^{x.z} X^x Z^z, the product picks up i^{x1.z1 + x2.z2 - x3.z3} (-1)^{z1.x2}.
PhasedPauli multiply(const PhasedPauli& a, const PhasedPauli& b) {
  check_dims(a.op, b.op);
  const uint64_t x3 = a.op.x ^ b.op.x, z3 = a.op.z ^ b.op.z;
  int e = std::popcount(a.op.x & a.op.z) + std::popcount(b.op.x & b.op.z) +
          2 * std::popcount(a.op.z & b.op.x) - std::popcount(x3 & z3);
  e += a.phase + b.phase;
  PhasedPauli r;
  r.op = PauliOp(a.op.n, x3, z3);
  r.phase = static_cast<uint8_t>(((e % 4) + 4) % 4);
  return r;
}

PhasedPauli multiply(const PauliOp& a, const PauliOp& b) {
  return multiply(PhasedPauli(a), PhasedPauli(b));
}

bool commutes(const PauliOp& a, const PauliOp& b) {
  check_dims(a, b);
  return (std::popcount((a.x & b.z) ^ (a.z & b.x)) & 1) == 0;
}

bool subsumes(const PauliOp& u, const PauliOp& p) {
  check_dims(u, p);
  const uint64_t s = u.support();
  return (p.x & s) == u.x && (p.z & s) == u.z;
}

std::vector<int> meet(const PauliOp& p, const PauliOp& q) {
  check_dims(p, q);
  const uint64_t agree = p.support() & q.support() & ~((p.x ^ q.x) | (p.z ^ q.z));
  return PauliOp(p.n, agree, 0).sites();
}

namespace {
int letter_digit(const PauliOp& p, int site) {
  switch (p.letter(site)) {
    case 'X': return 0;
    case 'Y': return 1;
    default: return 2;
  }
}
const char kDigitLetter[3] = {'X', 'Y', 'Z'};
}  // namespace

bool canonical_less(const PauliOp& a, const PauliOp& b) {
  const int wa = a.weight(), wb = b.weight();
  if (wa != wb) return wa < wb;
  const auto sa = a.sites(), sb = b.sites();
  if (sa != sb) return sa < sb;
  for (int s : sa) {
    const int da = letter_digit(a, s), db = letter_digit(b, s);
    if (da != db) return da < db;
  }
  return false;
}

SliceIndex::SliceIndex(int n, int ell) : n_(n), ell_(ell) {
  if (n < 0 || n > kMaxSites) throw DimensionError("qubit count out of range");
  if (ell < 0 || ell > n) throw DomainError("slice weight out of range");
  letters_ = ipow3(ell);
  const uint64_t c = binomial(n, ell);
  if (c > ~uint64_t{0} / letters_) throw DomainError("slice too large");
  size_ = c * letters_;
}

uint64_t SliceIndex::rank(const PauliOp& p) const {
  if (p.n != n_ || p.weight() != ell_) throw DomainError("word not in slice");
  uint64_t srank = 0, code = 0;
  int prev = -1, i = 0;
  for (uint64_t s = p.support(); s; s &= s - 1, ++i) {
    const int c = std::countr_zero(s);
    for (int j = prev + 1; j < c; ++j) srank += binomial(n_ - 1 - j, ell_ - 1 - i);
    code = code * 3 + static_cast<uint64_t>(letter_digit(p, c));
    prev = c;
  }
  return srank * letters_ + code;
}

PauliOp SliceIndex::unrank(uint64_t idx) const {
  if (idx >= size_) throw DomainError("slice index out of range");
  uint64_t srank = idx / letters_, code = idx % letters_;
  std::vector<int> sup;
  int j = 0;
  for (int i = 0; i < ell_; ++i) {
    for (;; ++j) {
      const uint64_t c = binomial(n_ - 1 - j, ell_ - 1 - i);
      if (srank < c) break;
      srank -= c;
    }
    sup.push_back(j++);
  }
  PauliOp p = PauliOp::identity(n_);
  for (int i = ell_ - 1; i >= 0; --i) {
    p.set(sup[i], kDigitLetter[code % 3]);
    code /= 3;
  }
  return p;
}

std::vector<PauliOp> enumerate_slice(int n, int ell) {
  if (ell > n) throw DomainError("slice weight exceeds qubit count");
  SliceIndex idx(n, ell);
  std::vector<PauliOp> out;
  out.reserve(idx.size());
  for (uint64_t i = 0; i < idx.size(); ++i) out.push_back(idx.unrank(i));
  return out;
}

std::string to_dense(const PauliOp& p) {
  std::string s(p.n, 'I');
  for (int i = 0; i < p.n; ++i) s[i] = p.letter(i);
  return s;
}

std::string to_sparse(const PauliOp& p) {
  std::string out;
  for (int s : p.sites()) {
    if (!out.empty()) out += ' ';
    out += p.letter(s);
    out += std::to_string(s + 1);
  }
  return out.empty() ? "I" : out;
}

PauliOp parse_pauli(std::string_view text, int n) {
  PauliOp p = PauliOp::identity(n);
  std::istringstream in{std::string(text)};
  std::vector<std::string> toks;
  for (std::string t; in >> t;) toks.push_back(t);
  if (toks.empty()) throw DomainError("empty Pauli word");
  const bool dense = toks.size() == 1 && toks[0].size() == static_cast<size_t>(n) &&
                     toks[0].find_first_not_of("IXYZixyz") == std::string::npos;
  if (dense) {
    for (int i = 0; i < n; ++i) p.set(i, toks[0][i]);
    return p;
  }
  if (toks.size() == 1 && (toks[0] == "I" || toks[0] == "Id")) return p;
  int prev = 0;
  for (const auto& t : toks) {
    if (t.size() < 2) throw DomainError("bad sparse Pauli token '" + t + "'");
    int site = 0;
    for (size_t i = 1; i < t.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(t[i])))
        throw DomainError("bad sparse Pauli token '" + t + "'");
      site = site * 10 + (t[i] - '0');
      if (site > kMaxSites) throw DimensionError("site out of range in '" + t + "'");
    }
    if (site < 1 || site > n) throw DimensionError("site out of range in '" + t + "'");
    if (site <= prev) throw DomainError("sparse sites must be strictly ascending");
    prev = site;
    if (std::toupper(static_cast<unsigned char>(t[0])) == 'I')
      throw DomainError("identity letter in sparse form");
    p.set(site - 1, t[0]);
  }
  return p;
}

std::string phase_string(uint8_t phase) {
  static const char* tab[4] = {"+1", "+i", "-1", "-i"};
  return tab[phase & 3];
}

uint8_t parse_phase(std::string_view s) {
  if (s == "+1" || s == "1") return 0;
  if (s == "+i" || s == "i") return 1;
  if (s == "-1") return 2;
  if (s == "-i") return 3;
  throw DomainError("bad phase '" + std::string(s) + "'");
}

uint64_t dense_bits(uint64_t mask, int n) {
  uint64_t out = 0;
  for (uint64_t s = mask; s; s &= s - 1) {
    const int i = std::countr_zero(s);
    out |= uint64_t{1} << (n - 1 - i);
  }
  return out;
}

}  // namespace hkxor
