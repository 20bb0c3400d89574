#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "vshs/amodel.hpp"
#include "vshs/picard_fuchs.hpp"
#include "vshs/vshs.hpp"

namespace vshs::io {

using Json = nlohmann::json;

// Scalars are strings "a/b" or "a/b+c/d*i"; series are {"order", "coeffs"}.
Json to_json(const Scalar& s);
Json to_json(const Series& s);
Json to_json(const Matrix& m);
Json to_json(const SeriesMatrix& m);
Json to_json(const DnObject& dn);
Json to_json(const GeometricVHS& vhs);
Json to_json(const ReesModule& module);
Json to_json(const NormalFormReport& report);
Json to_json(const InstantonTable& table);
Json to_json(const PFOperator& op);
Json to_json(const CheckReport& report);

Scalar scalar_from_json(const Json& j);
Series series_from_json(const Json& j);
Matrix matrix_from_json(const Json& j);
SeriesMatrix series_matrix_from_json(const Json& j);
DnObject dn_from_json(const Json& j);
GeometricVHS geometric_from_json(const Json& j);
ReesModule rees_from_json(const Json& j);
NormalFormReport report_from_json(const Json& j);
InstantonTable instantons_from_json(const Json& j);
PFOperator pf_from_json(const Json& j);

/// Parses text as JSON, mapping syntax errors to ParseError.
Json parse_json(std::string_view text);
/// Reads a whole file, IoError if it cannot be opened.
std::string read_file(const std::string& path);

}  // namespace vshs::io
