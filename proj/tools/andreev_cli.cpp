#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "andreev/andreev.hpp"

using namespace andreev;
using io::Json;

namespace {

enum Exit { kOk = 0, kVerdict = 1, kInput = 2, kNumeric = 3 };

struct RunConfig {
  std::string command;
  std::string input;
  std::string angles;
  std::string output;
  std::string format = "json";
  double tolerance = 1e-10;
  std::uint64_t seed = 0;
  int max_steps = 50;
};

// Marks failures that should map to exit 2 regardless of the command.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const RunConfig& cfg, const std::string& text) {
  if (cfg.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(cfg.output, std::ios::binary);
  if (!out) throw InputError("cannot write " + cfg.output);
  out << text;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

int trailing_int(const std::string& s, const std::string& prefix) {
  std::string rest = s.substr(prefix.size());
  std::size_t used = 0;
  int n = -1;
  try {
    n = std::stoi(rest, &used);
  } catch (const std::exception&) {
  }
  if (rest.empty() || used != rest.size()) throw InputError("bad size in '" + s + "'");
  return n;
}

// Built-in shapes: "catalog:dodecahedron", "catalog:prism7", "random:12" (seeded).
std::optional<AbstractPolyhedron> builtin(const std::string& source, std::uint64_t seed) {
  if (source.rfind("random:", 0) == 0) {
    int n = trailing_int(source, "random:");
    return primal(random_simple(n, seed, 4 * n));
  }
  if (source.rfind("catalog:", 0) != 0) return std::nullopt;
  const std::string name = source.substr(8);
  if (name == "tetrahedron") return catalog::tetrahedron();
  if (name == "cube") return catalog::cube();
  if (name == "dodecahedron") return catalog::dodecahedron();
  if (name == "truncated_tetrahedron") return catalog::truncated_tetrahedron();
  if (name == "alternately_truncated_cube") return catalog::alternately_truncated_cube();
  if (name == "cube_sum") return catalog::cube_sum();
  if (name.rfind("split_prism", 0) == 0) return catalog::split_prism(trailing_int(name, "split_prism"));
  if (name.rfind("prism", 0) == 0) return catalog::prism(trailing_int(name, "prism"));
  throw InputError("unknown catalog entry '" + name + "'");
}

AbstractPolyhedron load_complex(const RunConfig& cfg) {
  if (auto c = builtin(cfg.input, cfg.seed)) return *c;
  return io::complex_from_json(io::parse(read_file(cfg.input)));
}

AngleAssignment load_angles(const RunConfig& cfg, const AbstractPolyhedron& c) {
  if (cfg.angles.empty()) throw InputError("--angles is required");
  return io::angles_from_json(io::parse(read_file(cfg.angles)), c);
}

ExportFormat parse_format(const std::string& f) {
  if (f == "off") return ExportFormat::Off;
  if (f == "ball_json") return ExportFormat::BallJson;
  return ExportFormat::Json;
}

RealizeOptions realize_options(const RunConfig& cfg) {
  RealizeOptions opt;
  opt.path.tolerance = cfg.tolerance;
  opt.path.tracking_tolerance = std::max(cfg.tolerance, opt.path.tracking_tolerance);
  opt.path.polish_steps = cfg.max_steps;
  return opt;
}

int cmd_validate(const RunConfig& cfg) {
  Json j;
  AbstractPolyhedron c;
  try {
    c = load_complex(cfg);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidInput) throw;
    j["valid"] = false;
    j["error"] = std::string(to_string(e.code()));
    j["message"] = e.what();
    write_output(cfg, dump(j));
    return kVerdict;
  }
  j["valid"] = true;
  j["vertex_count"] = c.vertex_count();
  j["edge_count"] = c.edge_count();
  j["face_count"] = c.face_count();
  j["simple"] = is_simple(c);
  j["prism"] = static_cast<bool>(isomorphic(c, catalog::prism(c.face_count())));
  write_output(cfg, dump(j));
  return kOk;
}

int cmd_circuits(const RunConfig& cfg) {
  auto c = load_complex(cfg);
  auto all = prismatic_circuits(c, 3);
  auto four = prismatic_circuits(c, 4);
  all.insert(all.end(), four.begin(), four.end());
  write_output(cfg, dump(io::circuits_to_json(all)));
  return kOk;
}

int cmd_check_angles(const RunConfig& cfg) {
  auto c = load_complex(cfg);
  auto a = load_angles(cfg, c);
  auto rep = check_conditions(c, a);
  write_output(cfg, dump(io::conditions_to_json(rep)));
  return rep.member() ? kOk : kVerdict;
}

int cmd_feasible(const RunConfig& cfg) {
  auto c = load_complex(cfg);
  auto rep = feasible(c);
  write_output(cfg, dump(io::feasibility_to_json(rep)));
  return rep.nonempty ? kOk : kVerdict;
}

// A complex reduces to a trace; a trace file is replayed and checked.
int cmd_reduce(const RunConfig& cfg) {
  if (!builtin(cfg.input, cfg.seed)) {
    auto j = io::parse(read_file(cfg.input));
    if (j.contains("moves")) {
      auto t = io::trace_from_json(j);
      bool ok = io::verify_trace(t);
      Json out;
      out["verified"] = ok;
      out["moves"] = t.moves.size();
      write_output(cfg, dump(out));
      return ok ? kOk : kVerdict;
    }
  }
  auto c = load_complex(cfg);
  auto trace = reduce_to_dn(dual(c));
  write_output(cfg, dump(io::trace_to_json(trace)));
  return kOk;
}

int cmd_realize(const RunConfig& cfg) {
  auto c = load_complex(cfg);
  auto a = load_angles(cfg, c);
  RealizeReport rep;
  Realization r;
  try {
    r = realize(c, a, realize_options(cfg), &rep);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::InfeasibleAngles) throw;
    Json j;
    j["verdict"] = "infeasible";
    j["conditions"] = io::conditions_to_json(check_conditions(c, a));
    write_output(cfg, dump(j));
    return kVerdict;
  }
  auto fmt = parse_format(cfg.format);
  if (fmt == ExportFormat::Off) {
    write_output(cfg, export_realization(r, fmt));
    return kOk;
  }
  auto j = Json::parse(export_realization(r, fmt));
  j["report"] = io::report_to_json(rep);
  write_output(cfg, dump(j));
  return kOk;
}

// Re-exports a realization json in another format after re-deriving it from
// the normals.
int cmd_export(const RunConfig& cfg) {
  auto j = io::parse(read_file(cfg.input));
  auto c = io::complex_from_json(j);
  auto normals = io::guarded([&] { return parse_normals(j); });
  auto r = make_realization(c, normals);
  write_output(cfg, export_realization(r, parse_format(cfg.format)));
  return kOk;
}

bool is_input_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput:
    case ErrorCode::NotTrivalent:
    case ErrorCode::EdgeNotInTwoFaces:
    case ErrorCode::FacesMeetTwice:
    case ErrorCode::FaceTooSmall:
    case ErrorCode::EulerViolation:
    case ErrorCode::SizeMismatch:
    case ErrorCode::NotSimple:
    case ErrorCode::IsPrism:
    case ErrorCode::TooSmall:
    case ErrorCode::Unsupported:
      return true;
    default:
      return false;
  }
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  CLI::App app{"Andreev polyhedra: conditions, reduction, realization"};
  app.require_subcommand(1, 1);
  app.add_option("--input", cfg.input, "complex json, trace json, catalog:<name> or random:<N>");
  app.add_option("--angles", cfg.angles, "angle json");
  app.add_option("--output", cfg.output, "output path (default stdout)");
  app.add_option("--format", cfg.format, "realization output format")
      ->check(CLI::IsMember({"off", "json", "ball_json"}));
  app.add_option("--tolerance", cfg.tolerance, "Gram residual tolerance")->check(CLI::PositiveNumber);
  app.add_option("--seed", cfg.seed, "seed for random:<N> inputs");
  app.add_option("--max-steps", cfg.max_steps, "Newton steps for the final solves")->check(CLI::PositiveNumber);
  const std::map<std::string, int (*)(const RunConfig&)> commands{
      {"validate", cmd_validate}, {"circuits", cmd_circuits}, {"check-angles", cmd_check_angles},
      {"feasible", cmd_feasible}, {"reduce", cmd_reduce},     {"realize", cmd_realize},
      {"export", cmd_export}};
  for (const auto& [name, fn] : commands) app.add_subcommand(name)->fallthrough();
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kInput;
  }
  cfg.command = app.get_subcommands().front()->get_name();
  if (cfg.input.empty()) {
    std::cerr << "--input is required\n";
    return kInput;
  }
  try {
    return commands.at(cfg.command)(cfg);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return is_input_code(e.code()) ? kInput : kNumeric;
  }
}
