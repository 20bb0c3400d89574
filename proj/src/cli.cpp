#include "vshs/cli.hpp"

#include <CLI11.hpp>
#include <iomanip>
#include <ostream>
#include <variant>

#include "vshs/amodel.hpp"
#include "vshs/error.hpp"
#include "vshs/picard_fuchs.hpp"
#include "vshs/serialize.hpp"
#include "vshs/vshs.hpp"

namespace vshs::cli {

namespace {

using io::Json;

struct Config {
  std::string command;
  std::string input_path;
  int order = 16;
  std::string volume_text = "5";
  bool volume_given = false;
  int sign = 1;
  std::string format = "table";
  int decimal = 0;
};

using Input = std::variant<PFOperator, DnObject, GeometricVHS, ReesModule>;

Input load_input(const std::string& path) {
  const std::string text = io::read_file(path);
  std::size_t k = 0;
  while (k < text.size() && std::isspace(static_cast<unsigned char>(text[k]))) ++k;
  if (k == text.size()) throw Error(ErrorCode::ParseError, path + " is empty");
  if (text[k] != '{') return parse_pf_text(text);
  const Json j = io::parse_json(text);
  if (!j.is_object()) throw Error(ErrorCode::ParseError, "top-level JSON must be an object");
  if (!j.contains("type")) return io::pf_from_json(j);
  const std::string type = j.at("type").is_string() ? j.at("type").get<std::string>() : "";
  if (type == "DnObject") return io::dn_from_json(j);
  if (type == "GeometricVHS") return io::geometric_from_json(j);
  if (type == "ReesModule") return io::rees_from_json(j);
  if (type == "PFOperator") return io::pf_from_json(j);
  throw Error(ErrorCode::ParseError, "unsupported input type '" + type + "'");
}

std::string series_text(const Series& s, const Config& cfg, const std::string& var = "q") {
  std::string out = s.str();
  if (var != "q") {
    std::string renamed;
    for (char c : out) {
      if (c == 'q') {
        renamed += var;
      } else {
        renamed += c;
      }
    }
    out = renamed;
  }
  if (cfg.decimal > 0) {
    out += "\n    approx (" + std::to_string(cfg.decimal) + " digits, not exact): [";
    for (int k = 0; k < s.order(); ++k) out += (k ? ", " : "") + s[k].decimal(cfg.decimal);
    out += "]";
  }
  return out;
}

void print_instantons(std::ostream& out, const InstantonTable& t, const Config& cfg) {
  out << "instanton numbers (Aspinwall-Morrison inversion):\n";
  out << std::left << std::setw(6) << "d" << "n_d\n";
  for (const auto& [d, n] : t.entries) {
    out << std::left << std::setw(6) << d << n.str();
    if (cfg.decimal > 0) out << "  (approx " << n.decimal(cfg.decimal) << ")";
    if (t.nonintegral.count(d) != 0) out << "  [non-integral]";
    out << "\n";
  }
}

void print_report(std::ostream& out, const CheckReport& rep, const std::string& what) {
  out << what << " (verified mod q^" << rep.order << "):\n";
  for (const auto& r : rep.results) {
    out << "  " << (r.pass ? "PASS " : "FAIL ") << r.name;
    if (!r.pass && !r.detail.empty()) out << ": " << r.detail;
    out << "\n";
  }
}

const PFOperator& require_pf(const Input& in, const std::string& command) {
  if (const auto* op = std::get_if<PFOperator>(&in)) return *op;
  throw Error(ErrorCode::ParseError, command + " expects a Picard-Fuchs operator");
}

std::optional<Scalar> volume_for(const Config& cfg, bool has_pairing) {
  if (has_pairing && !cfg.volume_given) return std::nullopt;
  return Scalar::parse(cfg.volume_text);
}

int cmd_pipeline(const Config& cfg, const Input& in, std::ostream& out) {
  const PFOperator& op = require_pf(in, "pipeline");
  const Scalar volume = Scalar::parse(cfg.volume_text);
  const BModelResult res = bmodel_pipeline(op, volume, cfg.order, cfg.sign);
  if (cfg.format == "json") {
    Json j{{"order", cfg.order},
           {"volume", io::to_json(volume)},
           {"sign", cfg.sign},
           {"mirror_map", io::to_json(res.report.mirror_coordinate)},
           {"frobenius_mirror_map", io::to_json(res.frobenius_mirror)},
           {"mirror_maps_agree", true},
           {"normal_form", io::to_json(res.report)},
           {"chain_basis_dn", io::to_json(res.chain)}};
    if (res.g) j["g"] = io::to_json(*res.g);
    if (res.yukawa) j["yukawa"] = io::to_json(*res.yukawa);
    if (res.instantons) j["instantons"] = io::to_json(*res.instantons);
    out << j.dump(2) << "\n";
    return kOk;
  }
  out << "Picard-Fuchs operator of order " << op.order_theta << ", truncation order " << cfg.order
      << ", volume " << volume.str() << ", sign " << (cfg.sign > 0 ? "+1" : "-1") << "\n";
  out << "mirror map Q(q) = " << series_text(res.report.mirror_coordinate, cfg) << "\n";
  out << "  (Frobenius route agrees exactly)\n";
  out << "inverse q(Q) = " << series_text(reverse(res.report.mirror_coordinate), cfg, "Q") << "\n";
  if (!res.g) {
    out << "normal form n = " << res.report.dn.n << "; instanton extraction needs a fourth-order operator\n";
    return kOk;
  }
  out << "Yukawa coupling = " << series_text(*res.yukawa, cfg, "Q") << "\n";
  out << "g(Q) = " << series_text(*res.g, cfg, "Q") << "\n";
  print_instantons(out, *res.instantons, cfg);
  return kOk;
}

int cmd_mirror_map(const Config& cfg, const Input& in, std::ostream& out) {
  const PFOperator& op = require_pf(in, "mirror-map");
  const GeometricVHS vhs = companion_vhs(op, cfg.order);
  const CanonicalConnection cc = to_canonical_connection(vhs);
  const Series canonical = canonical_coordinate(cc.connection, cc.split.levels).coordinate;
  const Series frob = mirror_map_frobenius(frobenius_solve(op, 2, cfg.order));
  const bool agree = canonical == frob;
  if (cfg.format == "json") {
    out << Json{{"canonical_coordinate", io::to_json(canonical)},
                {"frobenius", io::to_json(frob)},
                {"agree", agree}}
               .dump(2)
        << "\n";
  } else {
    out << "canonical coordinate route: Q = " << series_text(canonical, cfg) << "\n";
    out << "Frobenius route:            Q = " << series_text(frob, cfg) << "\n";
    out << (agree ? "routes agree exactly\n" : "routes DISAGREE\n");
  }
  return agree ? kOk : kValidation;
}

int cmd_yukawa(const Config& cfg, const Input& in, std::ostream& out) {
  Series y;
  if (const auto* dn = std::get_if<DnObject>(&in)) {
    y = yukawa(*dn);
  } else {
    const auto res = bmodel_pipeline(require_pf(in, "yukawa"), Scalar::parse(cfg.volume_text), cfg.order, cfg.sign);
    if (!res.yukawa) throw Error(ErrorCode::InvalidStructure, "Yukawa coupling needs a fourth-order operator");
    y = *res.yukawa;
  }
  if (cfg.format == "json") {
    out << Json{{"yukawa", io::to_json(y)}}.dump(2) << "\n";
  } else {
    out << "Yukawa coupling = " << series_text(y, cfg, "Q") << "\n";
  }
  return kOk;
}

int cmd_instantons(const Config& cfg, const Input& in, std::ostream& out) {
  InstantonTable table;
  const Scalar volume = Scalar::parse(cfg.volume_text);
  if (const auto* dn = std::get_if<DnObject>(&in)) {
    if (dn->n != 3) throw Error(ErrorCode::InvalidStructure, "instanton extraction needs n = 3");
    DnObject d = cfg.sign < 0 ? rescale_coordinate(*dn, Scalar(-1)) : *dn;
    table = instantons_from_g(chain_basis(d).a_series(2, 1), volume);
  } else {
    const auto res = bmodel_pipeline(require_pf(in, "instantons"), volume, cfg.order, cfg.sign);
    if (!res.instantons) throw Error(ErrorCode::InvalidStructure, "instanton extraction needs a fourth-order operator");
    table = *res.instantons;
  }
  if (cfg.format == "json") {
    out << io::to_json(table).dump(2) << "\n";
  } else {
    print_instantons(out, table, cfg);
  }
  return kOk;
}

int cmd_normal_form(const Config& cfg, const Input& in, std::ostream& out) {
  NormalFormReport report;
  if (const auto* op = std::get_if<PFOperator>(&in)) {
    report = to_normal_form(companion_vhs(*op, cfg.order), Scalar::parse(cfg.volume_text));
  } else if (const auto* g = std::get_if<GeometricVHS>(&in)) {
    report = to_normal_form(*g, volume_for(cfg, g->pairing.has_value()));
  } else if (const auto* r = std::get_if<ReesModule>(&in)) {
    report = to_normal_form(rees_to_geometric(*r), volume_for(cfg, !r->pairing.empty()));
  } else {
    const auto& dn = std::get<DnObject>(in);
    report = to_normal_form(dn_to_geometric(dn), volume_for(cfg, true));
  }
  if (cfg.format == "json") {
    out << io::to_json(report).dump(2) << "\n";
    return kOk;
  }
  const DnObject& dn = report.dn;
  out << "normal form D_" << dn.n << " (verified mod q^" << dn.order() << ")\n";
  out << "mirror coordinate Q(q) = " << series_text(report.mirror_coordinate, cfg) << "\n";
  out << "graded dimensions:";
  for (const auto& [k, v] : dn.graded_dims) out << " V_" << k << "=" << v;
  out << "\nnormalised volume vector: basis index " << report.volume_index
      << (report.sign_ambiguity ? " (determined up to sign)" : "") << "\n";
  out << "pairing at q = 0:\n" << dn.pairing0.str();
  out << "A(Q) nonzero entries:\n" << dn.a_series.str();
  return kOk;
}

int cmd_check(const Config& cfg, const Input& in, std::ostream& out, std::ostream& err) {
  CheckReport rep;
  std::string what;
  if (const auto* dn = std::get_if<DnObject>(&in)) {
    rep = check_dn(*dn);
    what = "normal form invariants";
  } else if (const auto* g = std::get_if<GeometricVHS>(&in)) {
    rep = check_geometric(*g);
    what = "filtered flat bundle invariants";
  } else if (const auto* r = std::get_if<ReesModule>(&in)) {
    rep = verify_prevhs(*r);
    what = "pre-VSHS axioms";
  } else {
    const auto& op = std::get<PFOperator>(in);
    const GeometricVHS vhs = companion_vhs(op, cfg.order);
    rep = check_geometric(vhs);
    rep.add("residue_maximally_unipotent", nilpotency_index(vhs.connection.coefficient(0)) == op.order_theta - 1,
            "residue nilpotency index is not r - 1");
    const FrobeniusBasis basis = frobenius_solve(op, op.order_theta, cfg.order);
    bool annihilated = true;
    for (int j = 0; j < basis.depth(); ++j) {
      for (const auto& s : apply_operator(op, basis.solution(j))) annihilated = annihilated && s.is_zero();
    }
    rep.add("frobenius_annihilation", annihilated, "a Frobenius solution is not annihilated");
    what = "Picard-Fuchs operator";
  }
  if (cfg.format == "json") {
    out << io::to_json(rep).dump(2) << "\n";
  } else {
    print_report(out, rep, what);
  }
  if (!rep.ok()) {
    err << "error: invariant violated: " << rep.failures() << "\n";
    return kValidation;
  }
  return kOk;
}

int cmd_rees_roundtrip(const Config& cfg, const Input& in, std::ostream& out, std::ostream& err) {
  const auto* dn = std::get_if<DnObject>(&in);
  if (dn == nullptr) throw Error(ErrorCode::ParseError, "rees-roundtrip expects a DnObject");
  const ReesModule rees = from_normal_form(*dn);
  const CheckReport rep = verify_prevhs(rees);
  const GeometricVHS geo = rees_to_geometric(rees);
  const bool rees_ok = geometric_to_rees(geo) == rees;
  const NormalFormReport back = to_normal_form(geo, std::nullopt);
  const bool dn_ok = equal_up_to_sign(back.dn, *dn);
  if (cfg.format == "json") {
    out << Json{{"rees_module", io::to_json(rees)},
                {"prevhs_check", io::to_json(rep)},
                {"rees_roundtrip_identity", rees_ok},
                {"normal_form", io::to_json(back.dn)},
                {"normal_form_roundtrip_identity", dn_ok}}
               .dump(2)
        << "\n";
  } else {
    print_report(out, rep, "pre-VSHS axioms of from_normal_form(D)");
    out << "geometric_to_rees(rees_to_geometric(R)) == R: " << (rees_ok ? "yes" : "NO") << "\n";
    out << "to_normal_form(from_normal_form(D)) == D up to sign: " << (dn_ok ? "yes" : "NO") << "\n";
  }
  if (!rep.ok() || !rees_ok || !dn_ok) {
    err << "error: roundtrip failed\n";
    return kValidation;
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config cfg;
  CLI::App app{"Exact VSHS normal forms, mirror maps and instanton numbers", "vshs"};
  app.require_subcommand(1);
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"pipeline", "PF operator -> mirror map, Yukawa coupling, instanton numbers"},
      {"mirror-map", "compare the Frobenius and canonical-coordinate mirror maps"},
      {"yukawa", "Yukawa coupling of a PF operator or a DnObject"},
      {"instantons", "instanton numbers of a PF operator or a D_3 object"},
      {"normal-form", "normal form of a PF operator, GeometricVHS, ReesModule or DnObject"},
      {"check", "run the invariant suite on the input object"},
      {"rees-roundtrip", "DnObject -> Rees module -> normal form roundtrip"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->callback([&cfg, name = name] { cfg.command = name; });
    sub->add_option("-i,--input", cfg.input_path, "input file (JSON or PF operator text)")->required();
    sub->add_option("--order", cfg.order, "truncation order N (results are exact mod q^N)")
        ->check(CLI::Range(2, 4096));
    sub->add_option("--volume", cfg.volume_text, "volume normalisation, exact rational");
    sub->add_option("--sign", cfg.sign, "sign of the mirror coordinate, +1 or -1")->check(CLI::IsMember({1, -1}));
    sub->add_option("--format", cfg.format, "table or json")->check(CLI::IsMember({"table", "json"}));
    sub->add_option("--decimal", cfg.decimal, "also print k-digit decimal approximations")->check(CLI::Range(0, 200));
  }
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInput;
  }
  for (const auto* sub : app.get_subcommands()) {
    if (sub->count("--volume") > 0) cfg.volume_given = true;
  }

  try {
    const Scalar volume = Scalar::parse(cfg.volume_text);
    if (volume.is_zero()) throw Error(ErrorCode::ParseError, "--volume must be nonzero");
    const Input in = load_input(cfg.input_path);
    if (cfg.command == "pipeline") return cmd_pipeline(cfg, in, out);
    if (cfg.command == "mirror-map") return cmd_mirror_map(cfg, in, out);
    if (cfg.command == "yukawa") return cmd_yukawa(cfg, in, out);
    if (cfg.command == "instantons") return cmd_instantons(cfg, in, out);
    if (cfg.command == "normal-form") return cmd_normal_form(cfg, in, out);
    if (cfg.command == "check") return cmd_check(cfg, in, out, err);
    if (cfg.command == "rees-roundtrip") return cmd_rees_roundtrip(cfg, in, out, err);
    err << "error: unknown command\n";
    return kInput;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return (e.code() == ErrorCode::ParseError || e.code() == ErrorCode::IoError) ? kInput : kValidation;
  }
}

}  // namespace vshs::cli
