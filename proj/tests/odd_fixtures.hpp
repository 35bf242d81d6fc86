// Shared odd-arity fixtures: an independent edge predicate and compliant random instances.
#pragma once

#include <bit>
#include <cstdint>

#include "hkxor/instance.hpp"

namespace odd_fixtures {

using hkxor::PauliOp;

// 0 if (Q, R) fails conditions 1-2 for (P, P'); 1 if commuting (+PP'); 2 if anticommuting (-PP').
inline int classify(const PauliOp& P, const PauliOp& Pp, const PauliOp& Q, const PauliOp& R) {
  const int n = P.n;
  const uint64_t low = hkxor::site_mask(n);
  const PauliOp Q1(n, Q.x & low, Q.z & low), Q2(n, Q.x >> n, Q.z >> n);
  const PauliOp R1(n, R.x & low, R.z & low), R2(n, R.x >> n, R.z >> n);
  const hkxor::PhasedPauli a = hkxor::multiply(Q1, R1), b = hkxor::multiply(Q2, R2);
  if (!(a.op == P) || a.phase != 0 || !(b.op == Pp) || b.phase != 0) return 0;
  const int r = P.weight(), lo = r / 2, hi = r - lo;
  const int s1 = std::popcount(Q1.support() & P.support()), s2 = std::popcount(Q2.support() & Pp.support());
  if (!((s1 == lo && s2 == hi) || (s1 == hi && s2 == lo))) return 0;
  using hkxor::PhasedPauli;
  const PhasedPauli lhs = hkxor::multiply(hkxor::multiply(hkxor::multiply(PhasedPauli(Q2), PhasedPauli(Q1)), PhasedPauli(R1)),
                                          PhasedPauli(R2));
  const PhasedPauli rhs = hkxor::multiply(P, Pp);
  if (!(lhs.op == rhs.op)) return 0;
  if (lhs.phase == rhs.phase) return 1;
  if ((lhs.phase + 2) % 4 == rhs.phase) return 2;
  return 0;
}

inline hkxor::Instance compliant(uint64_t seed, int n = 5, size_t m = 500) {
  hkxor::GeneratorConfig cfg;
  cfg.n = n;
  cfg.k = 3;
  cfg.m = m;
  cfg.seed = seed;
  cfg.model = hkxor::Model::RademacherSemirandom;
  return hkxor::generate(cfg);
}

}  // namespace odd_fixtures
