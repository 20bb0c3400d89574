#include "vshs/serialize.hpp"

#include <fstream>
#include <sstream>

#include "vshs/error.hpp"

namespace vshs {

namespace io {

namespace {

template <typename F>
auto guarded(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string(what) + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw Error(ErrorCode::ParseError, std::string(what) + ": " + e.what());
  }
}

Json coeff_list(const Series& s, bool trim) {
  int end = s.order();
  if (trim) {
    while (end > 0 && s[end - 1].is_zero()) --end;
  }
  Json arr = Json::array();
  for (int k = 0; k < end; ++k) arr.push_back(to_json(s[k]));
  return arr;
}

std::vector<Scalar> scalars(const Json& arr) {
  std::vector<Scalar> out;
  for (const auto& x : arr) out.push_back(scalar_from_json(x));
  return out;
}

Json int_map(const std::map<int, SeriesMatrix>& m) {
  Json out = Json::object();
  for (const auto& [k, v] : m) out[std::to_string(k)] = to_json(v);
  return out;
}

std::map<int, SeriesMatrix> int_map_from(const Json& j) {
  std::map<int, SeriesMatrix> out;
  for (const auto& [k, v] : j.items()) out.emplace(std::stoi(k), series_matrix_from_json(v));
  return out;
}

void expect_type(const Json& j, const char* type) {
  if (!j.is_object() || !j.contains("type") || j.at("type") != type) {
    throw Error(ErrorCode::ParseError, std::string("expected an object with \"type\": \"") + type + "\"");
  }
}

}  // namespace

Json to_json(const Scalar& s) { return s.str(); }

Json to_json(const Series& s) { return Json{{"order", s.order()}, {"coeffs", coeff_list(s, false)}}; }

Json to_json(const Matrix& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json to_json(const SeriesMatrix& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(coeff_list(m(i, j), true));
    rows.push_back(std::move(row));
  }
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"order", m.order()}, {"entries", rows}};
}

Json to_json(const DnObject& dn) {
  Json dims = Json::object();
  for (const auto& [k, v] : dn.graded_dims) dims[std::to_string(k)] = v;
  return Json{{"type", "DnObject"},
              {"n", dn.n},
              {"graded_dims", dims},
              {"pairing0", to_json(dn.pairing0)},
              {"A", to_json(dn.a_series)}};
}

Json to_json(const GeometricVHS& vhs) {
  Json out{{"type", "GeometricVHS"},
           {"levels", vhs.levels},
           {"dimension_parity", vhs.dimension_parity},
           {"connection", to_json(vhs.connection)}};
  if (vhs.pairing) out["pairing"] = to_json(*vhs.pairing);
  return out;
}

Json to_json(const ReesModule& module) {
  return Json{{"type", "ReesModule"},
              {"degrees", module.degrees},
              {"dimension_parity", module.dimension_parity},
              {"connection", int_map(module.connection)},
              {"pairing", int_map(module.pairing)}};
}

Json to_json(const NormalFormReport& report) {
  return Json{{"type", "NormalFormReport"},
              {"mirror_coordinate", to_json(report.mirror_coordinate)},
              {"c1", to_json(report.c1)},
              {"gauge", to_json(report.gauge)},
              {"dn", to_json(report.dn)},
              {"normalized_volume_index", report.volume_index},
              {"sign_ambiguity", report.sign_ambiguity}};
}

Json to_json(const InstantonTable& table) {
  Json entries = Json::object();
  for (const auto& [d, n] : table.entries) entries[std::to_string(d)] = to_json(n);
  return Json{{"type", "InstantonTable"},
              {"max_degree", table.max_degree},
              {"entries", entries},
              {"nonintegral", std::vector<int>(table.nonintegral.begin(), table.nonintegral.end())}};
}

Json to_json(const PFOperator& op) {
  Json coeffs = Json::array();
  for (const auto& c : op.coeffs) {
    Json arr = Json::array();
    for (const auto& x : c) arr.push_back(to_json(x));
    coeffs.push_back(std::move(arr));
  }
  return Json{{"order", op.order_theta}, {"coeffs", coeffs}};
}

Json to_json(const CheckReport& report) {
  Json results = Json::array();
  for (const auto& r : report.results) {
    results.push_back(Json{{"axiom", r.name}, {"pass", r.pass}, {"detail", r.detail}});
  }
  return Json{{"type", "CheckReport"}, {"verified_mod_q_order", report.order}, {"ok", report.ok()}, {"results", results}};
}

Scalar scalar_from_json(const Json& j) {
  return guarded("scalar", [&] {
    if (j.is_number_integer()) return Scalar(j.get<long>());
    return Scalar::parse(j.get<std::string>());
  });
}

Series series_from_json(const Json& j) {
  return guarded("series", [&] {
    if (j.is_array()) {
      const auto c = scalars(j);
      return Series(c);
    }
    const auto c = scalars(j.at("coeffs"));
    const int order = j.at("order").get<int>();
    if (order < 0) throw Error(ErrorCode::ParseError, "negative series order");
    return Series::from_polynomial(c, order);
  });
}

Matrix matrix_from_json(const Json& j) {
  return guarded("matrix", [&] {
    std::vector<std::vector<Scalar>> rows;
    for (const auto& row : j) rows.push_back(scalars(row));
    for (const auto& row : rows) {
      if (row.size() != rows.front().size()) throw Error(ErrorCode::ParseError, "ragged matrix");
    }
    return rows.empty() ? Matrix() : Matrix::from_rows(rows);
  });
}

SeriesMatrix series_matrix_from_json(const Json& j) {
  return guarded("series matrix", [&] {
    const int rows = j.at("rows").get<int>();
    const int cols = j.at("cols").get<int>();
    const int order = j.at("order").get<int>();
    const Json& e = j.at("entries");
    if (static_cast<int>(e.size()) != rows) throw Error(ErrorCode::ParseError, "entries row count");
    SeriesMatrix m(rows, cols, order);
    for (int i = 0; i < rows; ++i) {
      if (static_cast<int>(e[static_cast<std::size_t>(i)].size()) != cols) throw Error(ErrorCode::ParseError, "entries column count");
      for (int k = 0; k < cols; ++k) {
        const auto c = scalars(e[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)]);
        m.set(i, k, Series::from_polynomial(c, order));
      }
    }
    return m;
  });
}

DnObject dn_from_json(const Json& j) {
  expect_type(j, "DnObject");
  return guarded("DnObject", [&] {
    DnObject dn;
    dn.n = j.at("n").get<int>();
    for (const auto& [k, v] : j.at("graded_dims").items()) dn.graded_dims[std::stoi(k)] = v.get<int>();
    dn.pairing0 = matrix_from_json(j.at("pairing0"));
    dn.a_series = series_matrix_from_json(j.at("A"));
    return dn;
  });
}

GeometricVHS geometric_from_json(const Json& j) {
  expect_type(j, "GeometricVHS");
  return guarded("GeometricVHS", [&] {
    GeometricVHS vhs;
    vhs.levels = j.at("levels").get<std::vector<int>>();
    vhs.dimension_parity = j.at("dimension_parity").get<int>();
    vhs.connection = series_matrix_from_json(j.at("connection"));
    if (j.contains("pairing") && !j.at("pairing").is_null()) vhs.pairing = series_matrix_from_json(j.at("pairing"));
    return vhs;
  });
}

ReesModule rees_from_json(const Json& j) {
  expect_type(j, "ReesModule");
  return guarded("ReesModule", [&] {
    ReesModule m;
    m.degrees = j.at("degrees").get<std::vector<int>>();
    m.dimension_parity = j.at("dimension_parity").get<int>();
    m.connection = int_map_from(j.at("connection"));
    m.pairing = int_map_from(j.at("pairing"));
    return m;
  });
}

NormalFormReport report_from_json(const Json& j) {
  expect_type(j, "NormalFormReport");
  return guarded("NormalFormReport", [&] {
    NormalFormReport r;
    r.mirror_coordinate = series_from_json(j.at("mirror_coordinate"));
    r.c1 = scalar_from_json(j.at("c1"));
    r.gauge = series_matrix_from_json(j.at("gauge"));
    r.dn = dn_from_json(j.at("dn"));
    r.volume_index = j.at("normalized_volume_index").get<int>();
    r.sign_ambiguity = j.at("sign_ambiguity").get<bool>();
    return r;
  });
}

InstantonTable instantons_from_json(const Json& j) {
  expect_type(j, "InstantonTable");
  return guarded("InstantonTable", [&] {
    InstantonTable t;
    t.max_degree = j.at("max_degree").get<int>();
    for (const auto& [k, v] : j.at("entries").items()) t.entries[std::stoi(k)] = scalar_from_json(v);
    for (const auto& [d, n] : t.entries) {
      if (!n.is_integer()) t.nonintegral.insert(d);
    }
    return t;
  });
}

PFOperator pf_from_json(const Json& j) {
  return guarded("PF operator", [&] {
    std::vector<std::vector<Scalar>> coeffs;
    for (const auto& c : j.at("coeffs")) {
      if (c.is_object()) {
        coeffs.push_back(scalars(c.at("coeffs")));
      } else {
        coeffs.push_back(scalars(c));
      }
    }
    PFOperator op = make_operator(std::move(coeffs));
    if (j.contains("order") && j.at("order").get<int>() != op.order_theta) {
      throw Error(ErrorCode::ParseError, "declared order " + std::to_string(j.at("order").get<int>()) +
                                             " differs from the highest theta power " + std::to_string(op.order_theta));
    }
    return op;
  });
}

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("invalid JSON: ") + e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace io

PFOperator parse_pf(std::string_view text) {
  std::size_t k = 0;
  while (k < text.size() && std::isspace(static_cast<unsigned char>(text[k]))) ++k;
  if (k < text.size() && text[k] == '{') return io::pf_from_json(io::parse_json(text));
  return parse_pf_text(text);
}

}  // namespace vshs
