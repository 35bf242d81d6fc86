// hkxor: generate, certify, check and witness Hamiltonian k-XOR instances.
#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "hkxor/kikuchi_odd.hpp"
#include "hkxor/oracle.hpp"
#include "hkxor/sos.hpp"
#include "hkxor/spectral.hpp"

using namespace hkxor;

namespace {

constexpr const char* kVersion = "0.1.0";

enum Exit { kOk = 0, kOther = 1, kContradiction = 2, kUsage = 3, kResource = 4 };

struct Output {
  std::string path;
  std::ostringstream buf;
  void flush() {
    if (path.empty() || path == "-") std::cout << buf.str();
    else write_text_file(path, buf.str());
  }
};

std::string join_argv(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) s += (i ? " " : "") + std::string(argv[i]);
  return s;
}

unsigned worker_cap(unsigned requested) {
  unsigned cap = std::max(1u, requested);
  if (const char* env = std::getenv("HKXOR_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) cap = std::min(cap, static_cast<unsigned>(v));
  }
  return cap;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string tok; std::getline(ss, tok, sep);)
    if (!tok.empty()) out.push_back(tok);
  return out;
}

std::string assignment_string(const std::vector<int>& x) {
  std::string s;
  for (int v : x) s += v > 0 ? '+' : '-';
  return s;
}

// CMOM v1 n=<n>: lines "<sites|-> value" with 1-indexed comma-separated sites.
// CDIST v1 n=<n>: lines "<+/- string> probability".
MomentTable read_lift_file(const std::string& path, int n, int d) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::string header;
  std::getline(in, header);
  std::istringstream hs(header);
  std::string magic, version, ntok;
  hs >> magic >> version >> ntok;
  if (version != "v1" || ntok != "n=" + std::to_string(n))
    throw ParseError(1, "lift file header must be '" + magic + " v1 n=" + std::to_string(n) + "'");
  int line = 1;
  if (magic == "CMOM") {
    MomentTable mu;
    for (std::string l; std::getline(in, l);) {
      ++line;
      if (l.empty()) continue;
      std::istringstream ls(l);
      std::string sites;
      double v;
      if (!(ls >> sites >> v)) throw ParseError(line, "expected '<sites> <value>'");
      uint64_t m = 0;
      if (sites != "-")
        for (const auto& t : split(sites, ',')) {
          const int s = std::stoi(t);
          if (s < 1 || s > n) throw ParseError(line, "site out of range");
          m |= uint64_t{1} << (s - 1);
        }
      mu[m] = v;
    }
    return mu;
  }
  if (magic == "CDIST") {
    std::vector<std::pair<std::vector<int>, double>> dist;
    for (std::string l; std::getline(in, l);) {
      ++line;
      if (l.empty()) continue;
      std::istringstream ls(l);
      std::string xs;
      double p;
      if (!(ls >> xs >> p) || static_cast<int>(xs.size()) != n) throw ParseError(line, "expected '<+/- string> <probability>'");
      std::vector<int> x;
      for (char c : xs) {
        if (c != '+' && c != '-') throw ParseError(line, "assignment characters must be + or -");
        x.push_back(c == '+' ? 1 : -1);
      }
      dist.emplace_back(std::move(x), p);
    }
    return moments_from_distribution(n, dist, d);
  }
  throw ParseError(1, "unknown lift file type '" + magic + "'");
}

size_t moment_rows(int n, int d) {
  size_t c = 0;
  for (int w = 0; w <= std::min(d / 2, n); ++w) {
    c += binomial(n, w) * ipow3(w);
    if (c > kMomentMatrixCap) return c;
  }
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral refutation and SoS witnesses for Hamiltonian k-XOR"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  // gen
  GeneratorConfig gcfg;
  std::string gmodel = "rademacher", gout;
  std::optional<uint64_t> ghseed;
  auto* gen = app.add_subcommand("gen", "Generate an instance file");
  gen->add_option("--n", gcfg.n, "qubits")->required();
  gen->add_option("--k", gcfg.k, "locality")->required();
  gen->add_option("--m", gcfg.m, "constraints")->required();
  gen->add_option("--model", gmodel, "rademacher | gaussian | random | one-basis-z");
  gen->add_option("--eps", gcfg.eps, "target eps, recorded for sweeps");
  gen->add_option("--seed", gcfg.seed, "coefficient seed");
  gen->add_option("--hypergraph-seed", ghseed, "hypergraph seed (defaults to --seed)");
  gen->add_option("--out", gout, "output file (stdout if absent)");

  // certify
  std::string cin_path, cout_path, cbranch = "auto";
  int cell = 0;
  double ceps = 0.5, ctol = 1e-6, cD = 3.0;
  uint64_t cmaxv = kDefaultMaxVertices, cseed = SolverOptions{}.seed;
  std::optional<uint64_t> ceta;
  auto* cert = app.add_subcommand("certify", "Certify an upper bound on the maximum eigenvalue");
  cert->add_option("--in", cin_path, "instance file")->required();
  cert->add_option("--ell", cell, "Kikuchi level")->required();
  cert->add_option("--eps", ceps, "eps for the odd decomposition");
  cert->add_option("--tol", ctol, "relative solver tolerance");
  cert->add_option("--branch", cbranch, "auto | even | odd");
  cert->add_option("--max-vertices", cmaxv, "Kikuchi vertex cap");
  cert->add_option("--eta", ceta, "local degree bound for edge deletion");
  cert->add_option("--D", cD, "constant inside the default eta");
  cert->add_option("--solver-seed", cseed, "Lanczos start-vector seed");
  cert->add_option("--out", cout_path, "report file (stdout if absent)");

  // oracle
  std::string oin, oout;
  int omaxn = kDenseMaxSites;
  std::vector<double> oexp;
  auto* orc = app.add_subcommand("oracle", "Dense exact checks for small instances");
  orc->add_option("--in", oin, "instance file")->required();
  orc->add_option("--max-n", omaxn, "dense size guard (<= 12)");
  orc->add_option("--expansion", oexp, "beta d: report the boundary expansion profile")->expected(2);
  orc->add_option("--out", oout, "report file (stdout if absent)");

  // witness
  std::string win, wout, wlift;
  int wdeg = 0;
  auto* wit = app.add_subcommand("witness", "Build a pseudo-expectation or a contradiction");
  wit->add_option("--in", win, "instance file")->required();
  wit->add_option("--degree", wdeg, "degree d")->required();
  wit->add_option("--lift", wlift, "classical moments (CMOM v1) or distribution (CDIST v1) file");
  wit->add_option("--out", wout, "witness file (stdout if absent)");

  // sweep
  int sn = 0, sk = 0, sell = 0;
  double seps = 0.5, stol = 1e-6;
  std::string sms, smodel = "rademacher", sout;
  uint64_t sseeds = 0, sseed0 = 1;
  std::optional<uint64_t> shseed;
  unsigned sjobs = 1;
  auto* swp = app.add_subcommand("sweep", "Certify a grid of (m, seed) cells");
  swp->add_option("--n", sn)->required();
  swp->add_option("--k", sk)->required();
  swp->add_option("--ell", sell)->required();
  swp->add_option("--eps", seps);
  swp->add_option("--tol", stol);
  swp->add_option("--m", sms, "comma-separated m values")->required();
  swp->add_option("--seeds", sseeds, "number of seeds per m");
  swp->add_option("--seed-start", sseed0, "first seed");
  swp->add_option("--hypergraph-seed", shseed, "fix the hypergraph across seeds");
  swp->add_option("--model", smodel);
  swp->add_option("--jobs", sjobs, "worker threads (capped by HKXOR_THREADS)");
  swp->add_option("--out", sout, "report file (stdout if absent)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  const std::string echo = join_argv(argc, argv);
  auto header = [&](std::ostream& o, const char* cmd) {
    o << "command=" << cmd << '\n' << "argv=" << echo << '\n' << "version=" << kVersion << '\n';
  };

  try {
    if (*gen) {
      gcfg.model = parse_model(gmodel);
      gcfg.hypergraph_seed = ghseed;
      const Instance inst = generate(gcfg);
      Output out{gout, {}};
      out.buf << serialize(inst);
      out.flush();
      return kOk;
    }

    if (*cert) {
      const Instance inst = read_instance_file(cin_path);
      CertifyOptions opt;
      opt.max_vertices = cmaxv;
      opt.eta = ceta;
      opt.D = cD;
      opt.solver.seed = cseed;
      const Certificate c = certify(inst, cell, ceps, ctol, parse_branch(cbranch), opt);
      Output out{cout_path, {}};
      header(out.buf, "certify");
      out.buf << "in=" << cin_path << "\nsolver.seed=" << cseed << '\n' << to_report(c);
      out.flush();
      return kOk;
    }

    if (*orc) {
      const Instance inst = read_instance_file(oin);
      if (omaxn > kDenseMaxSites) throw DomainError("--max-n cannot exceed 12");
      if (inst.n > omaxn) throw ResourceError("instance has n=" + std::to_string(inst.n) + " above --max-n");
      const auto t0 = std::chrono::steady_clock::now();
      Output out{oout, {}};
      header(out.buf, "oracle");
      out.buf.precision(17);
      out.buf << "in=" << oin << "\ndigest=" << hex64(digest(inst)) << "\nn=" << inst.n << "\nk=" << inst.k
              << "\nm=" << inst.size() << '\n';
      out.buf << "lambda_max=" << lambda_max(assemble(inst)) << '\n';
      char letter = 'Z';
      const bool ob = inst.one_basis(&letter);
      out.buf << "one_basis=" << (ob ? std::string(1, letter) : "no") << '\n';
      if (ob && inst.n <= 24) {
        const ClassicalMax cm = classical_max(inst);
        out.buf << "classical_max=" << cm.value << "\nargmax=" << assignment_string(cm.argmax) << '\n';
      }
      out.buf << "anticommuting_pairs=" << anticommuting_obstruction(inst).size() << '\n';
      if (oexp.size() == 2) {
        const double beta = oexp[0];
        const int d = static_cast<int>(oexp[1]);
        const ExpansionReport r = boundary_expansion_check(hyperedges(inst), beta, d);
        out.buf << "expansion.beta=" << beta << "\nexpansion.d=" << d << "\nexpansion.pass=" << (r.pass ? 1 : 0)
                << "\nexpansion.exhaustive=" << (r.exhaustive ? 1 : 0) << '\n';
        if (!r.pass) {
          out.buf << "expansion.witness=";
          for (size_t i = 0; i < r.witness.size(); ++i) out.buf << (i ? "," : "") << r.witness[i];
          out.buf << "\nexpansion.boundary=" << r.boundary << '\n';
        }
        if (r.exhaustive) {
          const auto prof = expansion_profile(hyperedges(inst), d);
          out.buf << "expansion.profile=";
          for (int s = 1; s < static_cast<int>(prof.size()); ++s) out.buf << (s > 1 ? "," : "") << prof[s];
          out.buf << '\n';
        }
      }
      out.buf << "seconds=" << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() << '\n';
      out.flush();
      return kOk;
    }

    if (*wit) {
      const Instance inst = read_instance_file(win);
      Output out{wout, {}};
      std::ostringstream rep;
      header(rep, "witness");
      rep.precision(17);
      rep << "in=" << win << "\ndigest=" << hex64(digest(inst)) << "\ndegree=" << wdeg << '\n';
      PseudoExpectation pe;
      const Instance* target = &inst;
      Instance lifted;
      if (!wlift.empty()) {
        const MomentTable mu = read_lift_file(wlift, inst.n, wdeg);
        pe = lift_classical(inst, mu, wdeg);
        lifted = lifted_hamiltonian(inst);
        target = &lifted;
        rep << "mode=lift\nclassical_value=" << classical_pseudo_value(inst, mu) << '\n';
      } else {
        if (!inst.one_basis()) {
          const auto pairs = anticommuting_obstruction(inst);
          rep << "experimental=1\nanticommuting_pairs=" << pairs.size() << '\n';
        }
        BuildResult res = max_entropy_build(inst, wdeg);
        if (auto* c = std::get_if<Contradiction>(&res)) {
          rep << "mode=max-entropy\nresult=contradiction\n";
          out.buf << rep.str() << dump(*c);
          out.flush();
          return kContradiction;
        }
        pe = std::move(std::get<PseudoExpectation>(res));
        rep << "mode=max-entropy\nresult=ok\n";
      }
      rep << "value=" << value_of_hamiltonian(pe, *target) << '\n';
      rep << "assigned=" << pe.values.size() << '\n';
      if (moment_rows(inst.n, wdeg) <= kMomentMatrixCap) {
        const PositivityReport pr = positivity_check(pe, wdeg);
        rep << "positivity.rows=" << pr.size << "\npositivity.min_eigenvalue=" << pr.min_eigenvalue
            << "\npositivity.pass=" << (pr.pass ? 1 : 0) << '\n';
      } else {
        rep << "positivity=skipped\n";
      }
      out.buf << rep.str() << dump(pe);
      out.flush();
      return kOk;
    }

    if (*swp) {
      std::vector<size_t> ms;
      for (const auto& t : split(sms, ',')) ms.push_back(static_cast<size_t>(std::stoull(t)));
      const Model model = parse_model(smodel);
      struct Cell {
        size_t m;
        uint64_t seed;
        double algval = 0.0;
        std::string error;
      };
      std::vector<Cell> cells;
      for (size_t m : ms)
        for (uint64_t s = 0; s < sseeds; ++s) cells.push_back({m, sseed0 + s});
      const unsigned jobs = worker_cap(sjobs);
      std::atomic<size_t> next{0};
      auto work = [&] {
        for (size_t i; (i = next++) < cells.size();) {
          auto& c = cells[i];
          try {
            GeneratorConfig g;
            g.n = sn;
            g.k = sk;
            g.m = c.m;
            g.eps = seps;
            g.seed = c.seed;
            g.hypergraph_seed = shseed;
            g.model = model;
            c.algval = certify(generate(g), sell, seps, stol, Branch::Auto).algval;
          } catch (const std::exception& e) {
            c.error = e.what();
          }
        }
      };
      std::vector<std::thread> pool;
      for (unsigned j = 1; j < std::min<size_t>(jobs, cells.size()); ++j) pool.emplace_back(work);
      work();
      for (auto& t : pool) t.join();
      for (const auto& c : cells)
        if (!c.error.empty()) throw std::runtime_error("cell m=" + std::to_string(c.m) + " seed=" + std::to_string(c.seed) + ": " + c.error);

      Output out{sout, {}};
      header(out.buf, "sweep");
      out.buf.precision(17);
      out.buf << "n=" << sn << "\nk=" << sk << "\nell=" << sell << "\neps=" << seps << "\nmodel=" << model_tag(model)
              << "\nseeds=" << sseeds << "\ncells=" << cells.size() << '\n';
      for (size_t i = 0; i < cells.size(); ++i)
        out.buf << "cell[" << i << "]=m:" << cells[i].m << ",seed:" << cells[i].seed << ",algval:" << cells[i].algval << '\n';
      for (size_t mi = 0; mi < ms.size() && sseeds > 0; ++mi) {
        std::vector<double> vals;
        for (const auto& c : cells)
          if (c.m == ms[mi]) vals.push_back(c.algval);
        size_t ok = 0;
        for (double v : vals) ok += v <= 0.5 + seps;
        std::sort(vals.begin(), vals.end());
        const size_t h = vals.size() / 2;
        const double median = vals.size() % 2 ? vals[h] : 0.5 * (vals[h - 1] + vals[h]);
        out.buf << "m[" << mi << "]=" << ms[mi] << ",success:" << static_cast<double>(ok) / static_cast<double>(vals.size())
                << ",median:" << median << '\n';
      }
      out.flush();
      return kOk;
    }
  } catch (const ResourceError& e) {
    std::cerr << "resource guard: " << e.what() << '\n';
    return kResource;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kOther;
  }
  return kOther;
}
