// Python bindings: generation, parsing, certification and the small exact checks.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hkxor/oracle.hpp"
#include "hkxor/sos.hpp"
#include "hkxor/spectral.hpp"

namespace py = pybind11;
using namespace hkxor;

namespace {

py::dict certificate_dict(const Certificate& c) {
  py::dict d;
  d["algval"] = c.algval;
  d["branch"] = c.branch;
  d["n"] = c.n;
  d["k"] = c.k;
  d["ell"] = c.ell;
  d["m"] = c.m;
  d["N"] = c.N;
  d["edges"] = c.edges;
  d["digest"] = c.digest;
  d["warnings"] = c.warnings;
  d["report"] = to_report(c);
  return d;
}

}  // namespace

PYBIND11_MODULE(_hkxor, m) {
  m.doc() = "Spectral refutation and SoS witnesses for Hamiltonian k-XOR";

  py::class_<Instance>(m, "Instance")
      .def_readonly("n", &Instance::n)
      .def_readonly("k", &Instance::k)
      .def("__len__", &Instance::size)
      .def_property_readonly("constraints",
                             [](const Instance& inst) {
                               std::vector<std::pair<std::string, double>> out;
                               for (const auto& c : inst.constraints) out.emplace_back(to_dense(c.pauli), c.coeff);
                               return out;
                             })
      .def("serialize", &serialize)
      .def("digest", [](const Instance& inst) { return hex64(digest(inst)); })
      .def("one_basis", [](const Instance& inst) { return inst.one_basis(); });

  m.def(
      "generate",
      [](int n, int k, size_t mm, const std::string& model, uint64_t seed, std::optional<uint64_t> hseed) {
        GeneratorConfig cfg;
        cfg.n = n;
        cfg.k = k;
        cfg.m = mm;
        cfg.model = parse_model(model);
        cfg.seed = seed;
        cfg.hypergraph_seed = hseed;
        return generate(cfg);
      },
      py::arg("n"), py::arg("k"), py::arg("m"), py::arg("model") = "rademacher", py::arg("seed") = 0,
      py::arg("hypergraph_seed") = py::none());
  m.def("parse", [](const std::string& doc) { return parse_instance(doc); });
  m.def("threshold_size", &threshold_size, py::arg("n"), py::arg("k"), py::arg("ell"), py::arg("eps"), py::arg("c_thr") = 1.0);

  m.def(
      "certify",
      [](const Instance& inst, int ell, double eps, double tol, const std::string& branch) {
        return certificate_dict(certify(inst, ell, eps, tol, parse_branch(branch)));
      },
      py::arg("instance"), py::arg("ell"), py::arg("eps") = 0.5, py::arg("tol") = 1e-6, py::arg("branch") = "auto");

  m.def("lambda_max", [](const Instance& inst) { return lambda_max(assemble(inst)); });
  m.def("classical_max", [](const Instance& inst) {
    const ClassicalMax c = classical_max(inst);
    return std::make_pair(c.value, c.argmax);
  });

  m.def(
      "max_entropy_build",
      [](const Instance& inst, int d) {
        py::dict out;
        BuildResult res = max_entropy_build(inst, d);
        if (const auto* c = std::get_if<Contradiction>(&res)) {
          out["ok"] = false;
          out["word"] = to_dense(c->word);
          out["ids"] = c->ids;
          out["dump"] = dump(*c);
          return out;
        }
        const auto& pe = std::get<PseudoExpectation>(res);
        out["ok"] = true;
        out["value"] = value_of_hamiltonian(pe, inst);
        out["assigned"] = pe.values.size();
        out["dump"] = dump(pe);
        return out;
      },
      py::arg("instance"), py::arg("degree"));

  m.def(
      "boundary_expansion_check",
      [](const Instance& inst, double beta, int d) {
        const ExpansionReport r = boundary_expansion_check(inst, beta, d);
        py::dict out;
        out["pass"] = r.pass;
        out["exhaustive"] = r.exhaustive;
        out["witness"] = r.witness;
        out["boundary"] = r.boundary;
        return out;
      },
      py::arg("instance"), py::arg("beta"), py::arg("d"));
}
