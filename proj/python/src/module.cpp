#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "vshs/cli.hpp"
#include "vshs/error.hpp"
#include "vshs/nilpotent.hpp"
#include "vshs/picard_fuchs.hpp"
#include "vshs/serialize.hpp"

namespace py = pybind11;
using namespace vshs;

namespace {

std::vector<std::string> coeff_strings(const Series& s) {
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(s.order()));
  for (int k = 0; k < s.order(); ++k) out.push_back(s[k].str());
  return out;
}

Series series_from_strings(const std::vector<std::string>& c) {
  Series s(static_cast<int>(c.size()));
  for (std::size_t k = 0; k < c.size(); ++k) s[static_cast<int>(k)] = Scalar::parse(c[k]);
  return s;
}

Matrix matrix_from_strings(const std::vector<std::vector<std::string>>& rows) {
  const int r = static_cast<int>(rows.size());
  Matrix m(r, r);
  for (int i = 0; i < r; ++i) {
    if (static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != r) {
      throw Error(ErrorCode::ParseError, "matrix must be square");
    }
    for (int j = 0; j < r; ++j) m(i, j) = Scalar::parse(rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
  }
  return m;
}

std::map<int, std::string> table_dict(const InstantonTable& t) {
  std::map<int, std::string> out;
  for (const auto& [d, n] : t.entries) out[d] = n.str();
  return out;
}

py::dict pipeline(const std::string& op_text, const std::string& volume, int order, int sign) {
  const BModelResult r = bmodel_pipeline(parse_pf(op_text), Scalar::parse(volume), order, sign);
  py::dict d;
  d["mirror_map"] = coeff_strings(r.report.mirror_coordinate);
  d["frobenius_mirror_map"] = coeff_strings(r.frobenius_mirror);
  d["normal_form"] = io::to_json(r.chain).dump();
  if (r.g) d["g"] = coeff_strings(*r.g);
  if (r.yukawa) d["yukawa"] = coeff_strings(*r.yukawa);
  if (r.instantons) {
    d["instantons"] = table_dict(*r.instantons);
    d["nonintegral"] = std::vector<int>(r.instantons->nonintegral.begin(), r.instantons->nonintegral.end());
  }
  return d;
}

std::map<int, std::vector<std::vector<std::string>>> weight_filtration_py(
    const std::vector<std::vector<std::string>>& rows) {
  const WeightFiltration w = weight_filtration(matrix_from_strings(rows));
  std::map<int, std::vector<std::vector<std::string>>> out;
  for (int k = -w.center() - 1; k <= w.center(); ++k) {
    auto& level = out[k];
    for (const Vector& v : w.at(k).basis()) {
      std::vector<std::string> sv;
      for (const Scalar& x : v) sv.push_back(x.str());
      level.push_back(std::move(sv));
    }
  }
  return out;
}

std::string input_json(const std::string& text) {
  const io::Json j = io::parse_json(text);
  if (!j.contains("type")) throw Error(ErrorCode::ParseError, "expected a typed JSON object");
  return j.at("type").get<std::string>();
}

GeometricVHS geometric_input(const std::string& text) {
  const std::string type = input_json(text);
  const io::Json j = io::parse_json(text);
  if (type == "DnObject") return dn_to_geometric(io::dn_from_json(j));
  if (type == "GeometricVHS") return io::geometric_from_json(j);
  if (type == "ReesModule") return rees_to_geometric(io::rees_from_json(j));
  throw Error(ErrorCode::ParseError, "unsupported input type '" + type + "'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact normal forms of variations of semi-infinite Hodge structure";

  py::register_exception<Error>(m, "VshsError", PyExc_ValueError);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out;
        std::ostringstream err;
        const int code = cli::run(args, out, err);
        return std::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Run the command line tool in-process; returns (exit_code, stdout, stderr).");

  m.def("pipeline", &pipeline, py::arg("operator"), py::arg("volume") = "5", py::arg("order") = 12,
        py::arg("sign") = 1,
        "Mirror map, Yukawa coupling and instanton numbers of a Picard-Fuchs operator (text or JSON).");

  m.def(
      "frobenius_basis",
      [](const std::string& op_text, int depth, int order) {
        std::vector<std::vector<std::string>> out;
        for (const Series& f : frobenius_solve(parse_pf(op_text), depth, order).f) out.push_back(coeff_strings(f));
        return out;
      },
      py::arg("operator"), py::arg("depth"), py::arg("order"));

  m.def(
      "parse_operator", [](const std::string& text) { return io::to_json(parse_pf(text)).dump(); }, py::arg("text"),
      "Parse a Picard-Fuchs operator and return its JSON form.");

  m.def(
      "normal_form",
      [](const std::string& text, std::optional<std::string> volume) {
        std::optional<Scalar> v;
        if (volume) v = Scalar::parse(*volume);
        return io::to_json(to_normal_form(geometric_input(text), v)).dump();
      },
      py::arg("json"), py::arg("volume") = py::none());

  m.def(
      "check",
      [](const std::string& text) {
        const std::string type = input_json(text);
        const io::Json j = io::parse_json(text);
        CheckReport rep;
        if (type == "DnObject") {
          rep = check_dn(io::dn_from_json(j));
        } else if (type == "GeometricVHS") {
          rep = check_geometric(io::geometric_from_json(j));
        } else if (type == "ReesModule") {
          rep = verify_prevhs(io::rees_from_json(j));
        } else {
          throw Error(ErrorCode::ParseError, "unsupported input type '" + type + "'");
        }
        std::map<std::string, bool> out;
        for (const auto& r : rep.results) out[r.name] = r.pass;
        return out;
      },
      py::arg("json"), "Invariant name -> pass flag.");

  m.def(
      "instantons_from_g",
      [](const std::vector<std::string>& g, const std::string& volume) {
        return table_dict(instantons_from_g(series_from_strings(g), Scalar::parse(volume)));
      },
      py::arg("g"), py::arg("volume"));

  m.def(
      "g_from_instantons",
      [](const std::map<int, std::string>& entries, const std::string& volume, int order) {
        InstantonTable t;
        for (const auto& [d, n] : entries) {
          t.entries[d] = Scalar::parse(n);
          t.max_degree = std::max(t.max_degree, d);
        }
        return coeff_strings(g_from_instantons(t, Scalar::parse(volume), order));
      },
      py::arg("entries"), py::arg("volume"), py::arg("order"));

  m.def("weight_filtration", &weight_filtration_py, py::arg("nilpotent"),
        "Monodromy weight filtration: k -> basis of W_k (rows of exact rational strings).");
}
