// sc: command-line front end over the stressed-chains library.
//
// Exit codes: 0 ok, 2 precondition rejected, 3 internal verification failed, 4 schema error.

#include "sc/balance.hpp"
#include "sc/decompose.hpp"
#include "sc/fans.hpp"
#include "sc/json_io.hpp"
#include "sc/optimize.hpp"
#include "sc/stress.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <sstream>

namespace {

using sc::Json;

constexpr const char* kToolVersion = "1.0.0";

struct Common {
  std::string input;
  std::string output;
  std::string format = "json";
  std::string convention = "weighted";
  std::string sign = "compress-positive";
  double tol = 1e-9;
  std::uint64_t seed = 1;
};

std::string read_input(const std::string& path) {
  std::stringstream ss;
  if (path.empty() || path == "-") {
    ss << std::cin.rdbuf();
  } else {
    std::ifstream in(path);
    if (!in) throw sc::SchemaError("cannot open input file '" + path + "'");
    ss << in.rdbuf();
  }
  return ss.str();
}

// Writes to a sibling temporary and renames it into place.
void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw sc::SchemaError("cannot write '" + tmp + "'");
    out << text;
  }
  std::filesystem::rename(tmp, path);
}

sc::Convention convention_of(const std::string& s) {
  if (s == "literal") return sc::Convention::Literal;
  if (s == "weighted") return sc::Convention::Weighted;
  throw sc::SchemaError("unknown convention '" + s + "'");
}

Json run_info(const Common& c, const std::string& command) {
  return Json{{"tool", "sc"},           {"tool_version", kToolVersion}, {"command", command},
              {"seed", c.seed},         {"tol", c.tol},                 {"convention", c.convention},
              {"sign", c.sign}};
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

// Flat "key: value" rendering of the scalar fields of a report payload.
std::string as_table(const Json& payload) {
  std::ostringstream os;
  for (const auto& [key, value] : payload.items()) {
    if (value.is_object() || value.is_array()) continue;
    os << std::left << std::setw(24) << key << ' ' << (value.is_string() ? value.get<std::string>() : value.dump())
       << '\n';
  }
  return os.str();
}

void emit(const Common& c, const Json& doc) {
  if (c.format == "table") {
    write_output(c.output, as_table(doc.at("payload")));
  } else if (c.format == "json") {
    write_output(c.output, sc::dump_json(doc));
  } else {
    throw sc::SchemaError("format '" + c.format + "' is not available for this command");
  }
}

// ---------------------------------------------------------------------------

int cmd_boundary(const Common& c) {
  const Json doc = sc::parse_json(read_input(c.input));
  const sc::StressedChain P = sc::chain_from_json(sc::document_payload(doc, "stressed_chain"));
  emit(c, sc::make_document("stressed_chain", sc::chain_to_json(sc::boundary_stressed(P))));
  return 0;
}

int cmd_decompose(const Common& c) {
  const Json doc = sc::parse_json(read_input(c.input));
  const sc::StressedChain P = sc::chain_from_json(sc::document_payload(doc, "stressed_chain"));
  const auto D = sc::decompose_boundary(P);
  Json faces = Json::array();
  double worst_block = 0;
  for (const auto& f : D.faces) {
    worst_block = std::max(worst_block, f.parts.block_residual);
    faces.push_back(Json{{"term", f.term},
                         {"face", f.face},
                         {"simplex", sc::simplex_to_json(f.simplex)},
                         {"F1", sc::vec_to_json(f.parts.F1)},
                         {"F2", sc::vec_to_json(f.parts.F2)},
                         {"normal_stress", sc::mat_to_json(f.parts.normal_stress)},
                         {"shear_stress", sc::mat_to_json(f.parts.shear_stress)},
                         {"orthogonal_force", sc::mat_to_json(f.parts.orthogonal_force_tensor)},
                         {"parallel_force", sc::mat_to_json(f.parts.parallel_force_tensor)},
                         {"block_residual", f.parts.block_residual}});
  }
  const bool verified = sc::chains_equivalent(D.S + D.F, sc::boundary_stressed(P), 3, c.seed, 1e-9);
  Json payload = run_info(c, "decompose");
  payload["verified"] = verified;
  payload["max_block_residual"] = worst_block;
  payload["S"] = sc::chain_to_json(D.S);
  payload["F"] = sc::chain_to_json(D.F);
  payload["faces"] = faces;
  emit(c, sc::make_document("report", payload));
  if (!verified) throw sc::VerificationError("decompose: S + F does not recombine to the boundary");
  return 0;
}

sc::StressedChain beams_to_chain(const std::vector<sc::BeamTerm>& beams, int n, int k) {
  sc::StressedChain P(n, k);
  for (const auto& b : beams) P.add(b.tensor, b.simplex);
  return P;
}

// Beams whose boundary reproduces a force system.
int balance_forces(const Common& c, const sc::ForceSystem& F, const std::string& command) {
  const auto eq = sc::equilibrium_check(F, convention_of(c.convention), std::max(c.tol, 1e-9));
  if (!eq.is_equilibrium)
    throw sc::PreconditionError(command + ": force system is not in equilibrium under the '" + c.convention +
                                "' convention");
  sc::BalanceOptions opt;
  opt.seed = c.seed;
  opt.tol = c.tol;
  const auto beams = sc::balance(F, opt);
  const sc::ForceSystem back = sc::beam_boundary(beams, F.dim, F.grade + 1);
  const bool ok = sc::force_systems_equal(back, F, 4, c.seed, 1e-7);
  Json payload = run_info(c, command);
  payload["route"] = "balance";
  payload["verified"] = ok;
  payload["beam_count"] = beams.size();
  payload["beams"] = sc::chain_to_json(beams_to_chain(beams, F.dim, F.grade + 1));
  emit(c, sc::make_document("report", payload));
  if (!ok) throw sc::VerificationError(command + ": beam boundary does not reproduce the force system");
  return 0;
}

int cmd_balance(const Common& c) {
  const Json doc = sc::parse_json(read_input(c.input));
  return balance_forces(c, sc::force_system_from_json(sc::document_payload(doc, "force_system")), "balance");
}

int cmd_solve(const Common& c) {
  const Json doc = sc::parse_json(read_input(c.input));
  const std::string kind = sc::document_kind(doc);
  if (kind == "force_system") return balance_forces(c, sc::force_system_from_json(doc.at("payload")), "solve");
  if (kind == "stressed_chain") {
    sc::BalanceOptions opt;
    opt.seed = c.seed;
    opt.tol = c.tol;
    const sc::StressedChain Q = sc::chain_from_json(doc.at("payload"));
    sc::SolveReport rep;
    const sc::StressedChain P = sc::solve_boundary(Q, opt, &rep);
    Json payload = run_info(c, "solve");
    payload["route"] = rep.route;
    payload["attempts"] = rep.attempts;
    payload["verified"] = rep.verified;
    payload["force_residual"] = rep.force_residual;
    payload["term_count"] = P.terms.size();
    payload["structural"] = sc::is_structural(P);
    payload["beams"] = sc::chain_to_json(P);
    payload["log"] = rep.log;
    emit(c, sc::make_document("report", payload));
    return 0;
  }
  throw sc::SchemaError("solve: expected a force_system or stressed_chain document");
}

int cmd_minimize(const Common& c) {
  const Json doc = sc::parse_json(read_input(c.input));
  const sc::GroundStructure gs = sc::ground_structure_from_json(sc::document_payload(doc, "ground_structure"));
  const sc::TrussSolution ts = sc::minimize_truss(gs, c.tol);
  if (c.format == "svg") {
    write_output(c.output, sc::render_svg(ts, gs));
    return 0;
  }
  emit(c, sc::make_document("truss_solution", sc::truss_solution_to_json(ts)));
  return 0;
}

int cmd_fan_check(const Common& c, const std::string& case_name, int grid) {
  if (grid < 1) throw sc::PreconditionError("fan-check: grid must be positive");
  const sc::FanCase fc = sc::fan_case_from_string(case_name);
  constexpr double half = std::numbers::pi / 2;
  const double h = half / grid;
  Json rows = Json::array();
  int cells = 0, holds = 0, negative_slope = 0, agree = 0;
  double min_margin = std::numeric_limits<double>::infinity();
  const bool one_dim = (fc == sc::FanCase::Case2 || fc == sc::FanCase::FourSpringAcute);
  const bool has_fan = (fc != sc::FanCase::FourSpringAcute);
  for (int i = 0; i < (one_dim ? 1 : grid); ++i)
    for (int j = 0; j < grid; ++j) {
      if (fc == sc::FanCase::Case3 && i + j + 1 >= grid) continue;
      const double a = one_dim ? half : (i + 0.5) * h;
      const double b = (j + 0.5) * h;
      const auto r = sc::check_inequality(fc, a, b);
      Json row{{"alpha", a}, {"beta", b}, {"margin", r.margin}, {"holds", r.holds}};
      ++cells;
      holds += r.holds;
      min_margin = std::min(min_margin, r.margin);
      if (has_fan) {
        const auto d = sc::fprime_at_zero(a, b, fc);
        row["fprime"] = d.value;
        negative_slope += d.value < 0;
        agree += (d.value < 0) == r.holds;
      }
      rows.push_back(row);
    }
  Json payload = run_info(c, "fan-check");
  payload["case"] = sc::to_string(fc);
  payload["grid"] = grid;
  payload["cells"] = cells;
  payload["inequality_holds"] = holds;
  payload["min_margin"] = min_margin;
  if (has_fan) {
    payload["negative_fprime"] = negative_slope;
    payload["sign_agreement"] = agree;
  }
  payload["all_hold"] = (holds == cells) && (!has_fan || (negative_slope == cells && agree == cells));
  payload["rows"] = rows;
  emit(c, sc::make_document("report", payload));
  return 0;
}

int cmd_audit(const Common& c, const std::string& solution_path, double angle_tol) {
  const Json doc = sc::parse_json(read_input(c.input));
  const sc::GroundStructure gs = sc::ground_structure_from_json(sc::document_payload(doc, "ground_structure"));
  sc::TrussSolution ts;
  if (solution_path.empty()) {
    ts = sc::minimize_truss(gs, c.tol);
  } else {
    const Json sdoc = sc::parse_json(read_input(solution_path));
    ts = sc::truss_solution_from_json(sc::document_payload(sdoc, "truss_solution"));
  }
  const auto v = sc::perpendicularity_audit(ts, gs, angle_tol, sc::sign_convention_from_string(c.sign));
  Json list = Json::array();
  for (const auto& x : v) {
    Json e{{"kind", x.kind}, {"node", x.node}};
    if (x.kind == "angle") {
      e["edge_a"] = x.edge_a;
      e["edge_b"] = x.edge_b;
      e["angle"] = x.angle;
    } else {
      e["net_force"] = x.net_force;
    }
    list.push_back(e);
  }
  Json payload = run_info(c, "audit");
  payload["angle_tol"] = angle_tol;
  payload["violation_count"] = v.size();
  payload["violations"] = list;
  emit(c, sc::make_document("report", payload));
  return 0;
}

int cmd_mass(const Common& c) {
  const Json doc = sc::parse_json(read_input(c.input));
  const sc::StressedChain P = sc::chain_from_json(sc::document_payload(doc, "stressed_chain"));
  Json payload = run_info(c, "mass");
  payload["nuclear"] = sc::mass_nuclear(P);
  payload["operator"] = sc::mass_operator(P);
  payload["structural"] = sc::is_structural(P);
  emit(c, sc::make_document("report", payload));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stressed chains: boundaries, decompositions, balancing and truss optimisation"};
  app.require_subcommand(1);
  Common c;
  auto common = [&](CLI::App* s) {
    s->add_option("input", c.input, "Input document (default: stdin)");
    s->add_option("--output,-o", c.output, "Output path (default: stdout)");
    s->add_option("--format", c.format, "json | table | svg (minimize only)")
        ->check(CLI::IsMember({"json", "table", "svg"}));
    s->add_option("--tol", c.tol, "Numerical tolerance");
    s->add_option("--seed", c.seed, "Seed for generic random choices");
    s->add_option("--convention", c.convention, "Equilibrium convention")
        ->check(CLI::IsMember({"literal", "weighted"}));
    s->add_option("--sign", c.sign, "Which spring tensor sign counts as compressed")
        ->check(CLI::IsMember({"compress-positive", "stretch-positive"}));
  };
  auto* boundary = app.add_subcommand("boundary", "Boundary of a stressed chain");
  auto* decompose = app.add_subcommand("decompose", "Four-block split of a boundary");
  auto* balance = app.add_subcommand("balance", "Beams balancing an equilibrium force system");
  auto* solve = app.add_subcommand("solve", "Structural chain with a prescribed boundary or force system");
  auto* minimize = app.add_subcommand("minimize", "Minimum-mass truss over a ground structure");
  auto* fan = app.add_subcommand("fan-check", "Fan inequalities and slopes on a grid");
  auto* audit = app.add_subcommand("audit", "Perpendicularity audit of a truss solution");
  auto* mass = app.add_subcommand("mass", "Nuclear and operator mass of a stressed chain");
  for (auto* s : {boundary, decompose, balance, solve, minimize, fan, audit, mass}) common(s);
  std::string fan_case = "case1";
  int grid = 50;
  fan->add_option("--case", fan_case, "case1 | case2 | case3 | four-spring-acute");
  fan->add_option("--grid", grid, "Grid resolution per angle");
  std::string solution_path;
  double angle_tol = 1e-6;
  audit->add_option("--solution", solution_path, "truss_solution document (default: solve the LP)");
  audit->add_option("--angle-tol", angle_tol, "Allowed deviation from a right angle (radians)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 4;
  }

  try {
    if (*boundary) return cmd_boundary(c);
    if (*decompose) return cmd_decompose(c);
    if (*balance) return cmd_balance(c);
    if (*solve) return cmd_solve(c);
    if (*minimize) return cmd_minimize(c);
    if (*fan) return cmd_fan_check(c, fan_case, grid);
    if (*audit) return cmd_audit(c, solution_path, angle_tol);
    if (*mass) return cmd_mass(c);
  } catch (const sc::PreconditionError& e) {
    std::cerr << "precondition rejected: " << e.what() << '\n';
    return 2;
  } catch (const sc::VerificationError& e) {
    std::cerr << "verification failed: " << e.what() << '\n';
    return 3;
  } catch (const sc::SchemaError& e) {
    std::cerr << "schema error: " << e.what() << '\n';
    return 4;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "schema error: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
