#include "hkxor/instance.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <sstream>

#include "hkxor/rng.hpp"

namespace hkxor {

std::string model_tag(Model m) {
  switch (m) {
    case Model::RademacherSemirandom: return "rademacher-semirandom";
    case Model::GaussianSemirandom: return "gaussian-semirandom";
    case Model::Random: return "random";
    case Model::OneBasisZ: return "one-basis-Z";
    case Model::Explicit: return "explicit";
  }
  return "explicit";
}

Model parse_model(std::string_view s) {
  std::string t(s);
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  if (t == "rademacher-semirandom" || t == "rademacher" || t == "semirandom")
    return Model::RademacherSemirandom;
  if (t == "gaussian-semirandom" || t == "gaussian") return Model::GaussianSemirandom;
  if (t == "random") return Model::Random;
  if (t == "one-basis-z" || t == "one-basis") return Model::OneBasisZ;
  if (t == "explicit") return Model::Explicit;
  throw DomainError("unknown model '" + std::string(s) + "'");
}

bool Instance::one_basis(char* letter) const {
  char common = 'I';
  for (const auto& c : constraints) {
    char l;
    if (!c.pauli.single_type(&l)) return false;
    if (l == 'I') continue;
    if (common == 'I') common = l;
    else if (common != l) return false;
  }
  if (letter) *letter = common == 'I' ? 'Z' : common;
  return true;
}

void Instance::add(const PauliOp& p, double b) {
  if (p.n != n) throw DimensionError("constraint qubit count differs from instance");
  constraints.push_back(Constraint{p.sites(), p, b});
}

void Instance::validate() const {
  if (n < 0 || n > kMaxSites) throw DimensionError("qubit count out of range");
  for (const auto& c : constraints) {
    if (c.pauli.n != n) throw DimensionError("constraint qubit count differs from instance");
    if (c.pauli.weight() != k || static_cast<int>(c.support.size()) != k)
      throw DomainError("constraint weight differs from k");
    if (c.support != c.pauli.sites()) throw DomainError("constraint support mismatch");
    if (model == Model::OneBasisZ && c.pauli.x != 0) throw DomainError("one-basis-Z word with X part");
    if ((model == Model::RademacherSemirandom || model == Model::Random || model == Model::OneBasisZ) &&
        std::abs(c.coeff) != 1.0)
      throw DomainError("Rademacher coefficient not +-1");
  }
}

namespace {

std::vector<int> sample_subset(CounterRng& rng, int n, int k) {
  std::vector<int> s;
  for (int j = n - k; j < n; ++j) {
    const int t = static_cast<int>(rng.below(static_cast<uint64_t>(j) + 1));
    if (std::find(s.begin(), s.end(), t) == s.end()) s.push_back(t);
    else s.push_back(j);
  }
  std::sort(s.begin(), s.end());
  return s;
}

PauliOp word_on(int n, const std::vector<int>& sup, CounterRng* rng, bool z_only) {
  static const char kLetters[3] = {'X', 'Y', 'Z'};
  PauliOp p = PauliOp::identity(n);
  for (int s : sup) {
    if (s < 0 || s >= n) throw DimensionError("hypergraph site out of range");
    p.set(s, z_only ? 'Z' : kLetters[rng->below(3)]);
  }
  return p;
}

}  // namespace

Instance generate(const GeneratorConfig& cfg) {
  if (cfg.n < 1 || cfg.n > kMaxSites) throw DimensionError("n out of range");
  if (cfg.k < 1 || cfg.k > cfg.n) throw DomainError("need 1 <= k <= n");
  if (cfg.m == 0) throw DomainError("m must be positive");
  Instance inst;
  inst.n = cfg.n;
  inst.k = cfg.k;
  inst.model = cfg.model;
  inst.seed = cfg.seed;
  const bool z_only = cfg.model == Model::OneBasisZ;
  CounterRng hrng(cfg.hypergraph_seed.value_or(cfg.seed), 1);
  CounterRng brng(cfg.seed, 2);

  std::vector<PauliOp> words;
  if (cfg.words && cfg.model != Model::Random) {
    if (cfg.words->size() != cfg.m) throw DomainError("explicit words must number m");
    for (auto w : *cfg.words) {
      if (w.n != cfg.n || w.weight() != cfg.k) throw DomainError("explicit word has wrong n or weight");
      if (z_only) w = PauliOp(w.n, 0, w.support());
      words.push_back(w);
    }
  } else if (cfg.hypergraph && cfg.model != Model::Random) {
    if (cfg.hypergraph->size() != cfg.m) throw DomainError("explicit hypergraph must have m edges");
    for (auto sup : *cfg.hypergraph) {
      std::sort(sup.begin(), sup.end());
      if (static_cast<int>(sup.size()) != cfg.k ||
          std::adjacent_find(sup.begin(), sup.end()) != sup.end())
        throw DomainError("hyperedge must have k distinct sites");
      words.push_back(word_on(cfg.n, sup, &hrng, z_only));
    }
  } else {
    if (cfg.model == Model::Explicit) throw DomainError("explicit model needs a hypergraph");
    for (size_t i = 0; i < cfg.m; ++i)
      words.push_back(word_on(cfg.n, sample_subset(hrng, cfg.n, cfg.k), &hrng, z_only));
  }
  for (const auto& w : words) {
    const double b = cfg.model == Model::GaussianSemirandom ? brng.normal()
                                                             : static_cast<double>(brng.sign());
    inst.add(w, b);
  }
  return inst;
}

int64_t threshold_size(double n, int k, int ell, double eps, double c_thr) {
  if (!(eps > 0.0 && eps <= 1.0)) throw DomainError("eps must lie in (0,1]");
  if (k < 1 || ell < 1 || 2.0 * ell < k || ell > n / 2.0) throw DomainError("need k/2 <= ell <= n/2");
  if (!(c_thr > 0.0)) throw DomainError("C_thr must be positive");
  const double v = c_thr * n * std::pow(n / ell, k / 2.0 - 1.0) * std::log(n) * std::pow(eps, -4.0);
  return static_cast<int64_t>(std::ceil(v - 1e-9 * std::max(1.0, v)));
}

std::string format_double(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string serialize(const Instance& inst) {
  std::ostringstream out;
  out << "HKXOR v1 n=" << inst.n << " k=" << inst.k << " m=" << inst.size()
      << " model=" << model_tag(inst.model) << " seed=" << inst.seed << " rng=" << kRngId << '\n';
  for (const auto& c : inst.constraints) out << to_sparse(c.pauli) << ' ' << format_double(c.coeff) << '\n';
  return out.str();
}

namespace {

template <class T>
T parse_num(std::string_view s, int line, const char* what) {
  T v{};
  auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size())
    throw ParseError(line, std::string("bad ") + what + " '" + std::string(s) + "'");
  return v;
}

}  // namespace

Instance parse_instance(std::string_view doc) {
  std::vector<std::string_view> lines;
  size_t pos = 0;
  while (pos < doc.size()) {
    size_t e = doc.find('\n', pos);
    if (e == std::string_view::npos) e = doc.size();
    std::string_view l = doc.substr(pos, e - pos);
    if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
    lines.push_back(l);
    pos = e + 1;
  }
  if (lines.empty() || lines[0].empty()) throw ParseError(1, "missing header");

  Instance inst;
  std::istringstream hdr{std::string(lines[0])};
  std::string magic, version;
  hdr >> magic >> version;
  if (magic != "HKXOR") throw ParseError(1, "not an HKXOR document");
  if (version != "v1") throw ParseError(1, "unsupported format version '" + version + "'");
  bool have_n = false, have_k = false, have_m = false;
  int64_t m = 0;
  for (std::string tok; hdr >> tok;) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw ParseError(1, "bad header token '" + tok + "'");
    const std::string key = tok.substr(0, eq);
    const std::string_view val = std::string_view(tok).substr(eq + 1);
    if (key == "n") inst.n = parse_num<int>(val, 1, "n"), have_n = true;
    else if (key == "k") inst.k = parse_num<int>(val, 1, "k"), have_k = true;
    else if (key == "m") m = parse_num<int64_t>(val, 1, "m"), have_m = true;
    else if (key == "seed") inst.seed = parse_num<uint64_t>(val, 1, "seed");
    else if (key == "model") {
      try {
        inst.model = parse_model(val);
      } catch (const DomainError& e) {
        throw ParseError(1, e.what());
      }
    } else if (key == "rng") {
      if (val != kRngId) throw ParseError(1, "unknown rng id '" + std::string(val) + "'");
    } else {
      throw ParseError(1, "unknown header key '" + key + "'");
    }
  }
  if (!have_n || !have_k || !have_m) throw ParseError(1, "header needs n, k and m");
  if (inst.n < 0 || inst.n > kMaxSites || inst.k < 0 || m < 0) throw ParseError(1, "header values out of range");

  size_t li = 1;
  for (int64_t c = 0; c < m; ++c, ++li) {
    const int line_no = static_cast<int>(li) + 1;
    if (li >= lines.size() || lines[li].empty())
      throw ParseError(line_no, "expected " + std::to_string(m) + " constraints, file ends early");
    const std::string_view l = lines[li];
    if (l.rfind("HKXOR", 0) == 0) throw ParseError(line_no, "duplicate header");
    const auto sp = l.find_last_of(' ');
    if (sp == std::string_view::npos) throw ParseError(line_no, "constraint needs a word and a coefficient");
    const double b = parse_num<double>(l.substr(sp + 1), line_no, "coefficient");
    try {
      const PauliOp p = parse_pauli(l.substr(0, sp), inst.n);
      if (p.weight() != inst.k) throw ParseError(line_no, "word weight differs from k");
      inst.add(p, b);
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception& e) {
      throw ParseError(line_no, e.what());
    }
  }
  for (; li < lines.size(); ++li)
    if (!lines[li].empty()) throw ParseError(static_cast<int>(li) + 1, "trailing content after m constraints");
  try {
    inst.validate();
  } catch (const std::exception& e) {
    throw ParseError(1, e.what());
  }
  return inst;
}

Instance read_instance_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_instance(ss.str());
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

uint64_t fnv1a64(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

uint64_t digest(const Instance& inst) { return fnv1a64(serialize(inst)); }

std::string hex64(uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace hkxor
