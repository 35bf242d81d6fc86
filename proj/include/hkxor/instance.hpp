// Hamiltonian k-XOR instances: H_I = Id/2 + (1/2|H|) sum_C b_C P_C.
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hkxor/pauli.hpp"

namespace hkxor {

enum class Model { RademacherSemirandom, GaussianSemirandom, Random, OneBasisZ, Explicit };

std::string model_tag(Model m);
// Accepts the file tags and the short CLI aliases (rademacher, gaussian, one-basis-z).
Model parse_model(std::string_view s);

struct Constraint {
  std::vector<int> support;  // sorted, 0-indexed
  PauliOp pauli;
  double coeff = 0.0;
};

struct Instance {
  int n = 0;
  int k = 0;
  Model model = Model::Explicit;
  uint64_t seed = 0;
  std::vector<Constraint> constraints;

  size_t size() const { return constraints.size(); }
  bool one_basis(char* letter = nullptr) const;
  void add(const PauliOp& p, double b);
  void validate() const;
};

struct GeneratorConfig {
  int n = 0;
  int k = 0;
  size_t m = 0;
  double eps = 0.5;
  uint64_t seed = 0;
  std::optional<uint64_t> hypergraph_seed;
  Model model = Model::RademacherSemirandom;
  // Explicit supports (0-indexed); words, when given, also fix the Pauli types.
  std::optional<std::vector<std::vector<int>>> hypergraph;
  std::optional<std::vector<PauliOp>> words;
};

Instance generate(const GeneratorConfig& cfg);

int64_t threshold_size(double n, int k, int ell, double eps, double c_thr = 1.0);

struct ParseError : std::runtime_error {
  ParseError(int line, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_no(line) {}
  int line_no;
};

std::string serialize(const Instance& inst);
Instance parse_instance(std::string_view doc);
Instance read_instance_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

std::string format_double(double v);
uint64_t fnv1a64(std::string_view s);
uint64_t digest(const Instance& inst);
std::string hex64(uint64_t v);

}  // namespace hkxor
