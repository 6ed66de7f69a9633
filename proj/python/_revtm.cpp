#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <filesystem>

#include "revtm/corpus.hpp"
#include "revtm/depth.hpp"
#include "revtm/envelope.hpp"
#include "revtm/machine_format.hpp"
#include "revtm/prefix.hpp"
#include "revtm/reversibility.hpp"

namespace py = pybind11;
using namespace revtm;

namespace {

py::object to_py(const Json& j) {
  switch (j.type()) {
    case Json::value_t::null: return py::none();
    case Json::value_t::boolean: return py::bool_(j.get<bool>());
    case Json::value_t::number_integer: return py::int_(j.get<std::int64_t>());
    case Json::value_t::number_unsigned: return py::int_(j.get<std::uint64_t>());
    case Json::value_t::number_float: return py::float_(j.get<double>());
    case Json::value_t::string: return py::str(j.get<std::string>());
    case Json::value_t::array: {
      py::list l;
      for (const auto& v : j) l.append(to_py(v));
      return std::move(l);
    }
    case Json::value_t::object: {
      py::dict d;
      for (const auto& [k, v] : j.items()) d[py::str(k)] = to_py(v);
      return std::move(d);
    }
    default: return py::none();
  }
}

Machine machine_from(const std::string& text) { return as_quadruple(parse_machine(text)); }

Variant variant_from(const std::string& s) {
  if (s == "gen") return Variant::General;
  if (s == "rev") return Variant::Reversible;
  throw py::value_error("variant must be 'gen' or 'rev'");
}

class PyDepthLab {
 public:
  PyDepthLab(std::size_t max_len, std::uint64_t budget, const std::string& aux, unsigned workers,
             std::optional<std::string> cache_dir)
      : ledger_(std::make_unique<RunLedger>(
            u_.digest(), cache_dir ? std::optional<std::filesystem::path>(*cache_dir) : cache_dir_from_env())),
        lab_(u_, {max_len, budget}, aux, {std::max(1u, workers), ledger_.get()}) {}

  py::object k_bounded(const std::string& x) { return to_py(to_json(lab_.k_bounded(x))); }
  py::object logical_depth(const std::string& x, std::size_t b, const std::string& variant) {
    return to_py(to_json(lab_.logical_depth(x, b, variant_from(variant))));
  }
  py::object table(const std::string& kind, std::size_t n_max, const std::string& variant) {
    if (kind == "psi") return to_py(to_json(lab_.psi_table(n_max)));
    if (kind == "phi") return to_py(to_json(lab_.phi_table(n_max)));
    if (kind == "f") return to_py(to_json(lab_.f_table(n_max, variant_from(variant))));
    throw py::value_error("table must be 'psi', 'phi' or 'f'");
  }
  std::string digest() const { return u_.digest(); }
  void flush() { ledger_->flush(); }

 private:
  UniversalMachine u_;
  std::unique_ptr<RunLedger> ledger_;
  DepthLab lab_;
};

}  // namespace

PYBIND11_MODULE(_revtm, m) {
  m.doc() = "Reversible Turing machines, a universal prefix machine and budgeted logical depth";
  m.attr("__version__") = kToolVersion;

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<MachineError>(m, "MachineError", PyExc_ValueError);
  py::register_exception<NotReversibleError>(m, "NotReversibleError", PyExc_ValueError);

  m.def("corpus_names", [] {
    std::vector<std::string> names;
    for (const auto& c : corpus()) names.push_back(c.name);
    return names;
  });
  m.def("corpus_text", [](const std::string& name) {
    for (const auto& s : corpus_sources()) {
      if (s.name == name) return s.text;
    }
    throw py::key_error(name);
  });

  m.def(
      "validate",
      [](const std::string& text) {
        Machine mc = machine_from(text);
        return to_py(to_json(validate_machine(mc), mc));
      },
      py::arg("machine_text"));
  m.def(
      "run",
      [](const std::string& text, const std::string& input, std::uint64_t budget) {
        Machine mc = machine_from(text);
        RunResult r = run(mc, input, budget);
        py::dict d;
        d["outcome"] = r.outcome == Outcome::Halted ? "halted" : "budget_exceeded";
        d["steps"] = r.steps;
        d["output"] = r.output;
        return d;
      },
      py::arg("machine_text"), py::arg("input"), py::arg("budget") = 1000000);
  m.def(
      "verify_reversible",
      [](const std::string& text) {
        ReversibilityReport r = verify_reversible(machine_from(text));
        std::vector<std::pair<std::size_t, std::size_t>> pairs;
        for (const RulePair& p : r.conflicts) pairs.emplace_back(p.first + 1, p.second + 1);
        return pairs;
      },
      py::arg("machine_text"), "Pairs of 1-based rule numbers with overlapping ranges.");
  m.def(
      "bennett_compile", [](const std::string& text) { return format_machine(bennett_transform_multi(machine_from(text)).machine); },
      py::arg("machine_text"));

  m.def("encode_index", &encode_index);
  m.def("bijective_binary", &bijective_binary);
  m.def("literal_payload", [](const std::string& x) { return literal_payload(x); });
  m.def("catalog_encoding", [](std::size_t c) { return catalog_index(c).encoding(); });

  py::class_<UniversalMachine>(m, "UniversalMachine")
      .def(py::init<>())
      .def_property_readonly("digest", &UniversalMachine::digest)
      .def(
          "run",
          [](const UniversalMachine& u, const std::string& bits, const std::string& aux, std::uint64_t budget) {
            if (!is_bits(bits) || !is_bits(aux)) throw py::value_error("program and aux must be binary strings");
            PrefixRunResult r;
            {
              py::gil_scoped_release release;
              r = u.run(bits, aux, budget);
            }
            return to_py(to_json(r));
          },
          py::arg("program"), py::arg("aux") = "", py::arg("budget") = 10000)
      .def(
          "run_reversible",
          [](const UniversalMachine& u, const std::string& bits, const std::string& aux, std::uint64_t budget) {
            if (!is_bits(bits) || !is_bits(aux)) throw py::value_error("program and aux must be binary strings");
            ReversiblePrefixRunResult r = u.run_reversible(bits, aux, budget);
            py::dict d = to_py(to_json(r.run));
            d["restored"] = r.restored;
            return d;
          },
          py::arg("program"), py::arg("aux") = "", py::arg("budget") = 10000)
      .def(
          "check_prefix",
          [](const UniversalMachine& u, std::size_t max_len, std::uint64_t budget) {
            PrefixCheckReport r = prefix_free_check(u, max_len, budget);
            py::dict d;
            d["runs"] = r.runs;
            d["programs"] = r.programs;
            d["violations"] = r.violations;
            return d;
          },
          py::arg("max_len"), py::arg("budget"));

  py::class_<PyDepthLab>(m, "DepthLab")
      .def(py::init<std::size_t, std::uint64_t, const std::string&, unsigned, std::optional<std::string>>(),
           py::arg("max_len"), py::arg("budget"), py::arg("aux") = "", py::arg("workers") = 1,
           py::arg("cache_dir") = py::none())
      .def_property_readonly("digest", &PyDepthLab::digest)
      .def("k_bounded", &PyDepthLab::k_bounded, py::arg("x"))
      .def("logical_depth", &PyDepthLab::logical_depth, py::arg("x"), py::arg("b") = 0, py::arg("variant") = "rev")
      .def("table", &PyDepthLab::table, py::arg("kind"), py::arg("n_max") = 3, py::arg("variant") = "rev")
      .def("flush", &PyDepthLab::flush);
}
