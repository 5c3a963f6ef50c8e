#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "hberry/errors.hpp"
#include "hberry/numerics.hpp"
#include "hberry/pipeline.hpp"

namespace fs = std::filesystem;
using namespace hberry;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

bool is_config_error(ErrorCode c) {
  return c == ErrorCode::ConfigError || c == ErrorCode::SchemaError || c == ErrorCode::UnknownName ||
         c == ErrorCode::MeshMismatch;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::ConfigError, "cannot write " + path.string());
  out << text;
}

// Writes every artifact only after the whole run succeeded.
void emit(const pipeline::RunConfig& cfg, const pipeline::RunResult& res) {
  const std::string report = io::report_to_json(res.report);
  if (cfg.report_path.empty()) {
    std::cout << report;
  } else {
    write_file(cfg.report_path, report);
  }
  for (const auto& [name, csv] : res.dumps) write_file(fs::path(cfg.dump_dir) / name, csv);
  if (!cfg.family_path.empty()) write_file(cfg.family_path, res.family_json);
}

std::vector<std::string> split_names(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

struct Check {
  std::string name;
  pipeline::RunConfig cfg;
  std::function<bool(const io::InvariantReport&)> pass;
};

double value_of(const io::InvariantReport& r, const std::string& name) {
  for (const auto& e : r.invariants)
    if (e.name == name) return e.value;
  throw Error(ErrorCode::PreconditionViolated, "missing " + name);
}

int selftest() {
  std::vector<Check> checks;
  {
    pipeline::RunConfig c;
    c.refinements = 1;
    c.group = {"T", "C2x", "C2y"};
    c.invariants = {"ddks", "cocycles", "mu_RP_T", "mu_T_C2x_C2y", "pump_C2x", "pump_fixed_point", "gamma2_fixed_point",
                    "ddks_parity_berry", "ddks_parity_T", "ddks_mod4_z2z2", "ddks_parity_z2z2"};
    checks.push_back({"dimer S=1/2 on S3, ddks = 1 with relations", c, [](const io::InvariantReport& r) {
                        return value_of(r, "ddks") == 1.0 && numerics::angle_distance(value_of(r, "pump_C2x"), kPi) < 1e-6;
                      }});
  }
  {
    pipeline::RunConfig c;
    c.model.type = "spin_field";
    c.dim = 2;
    c.group = {"c4"};
    c.invariants = {"chern", "chern_mod4", "descendant"};
    checks.push_back({"spin field S=1/2 on S2, chern = 1", c,
                      [](const io::InvariantReport& r) { return value_of(r, "chern") == 1.0; }});
  }
  {
    pipeline::RunConfig c;
    c.model.type = "purestate_2x2";
    c.dim = 2;
    c.invariants = {"xi_s2"};
    checks.push_back({"two-level model, xi(S2) = pi", c, [](const io::InvariantReport& r) {
                        return numerics::angle_distance(value_of(r, "xi_s2"), kPi) < 1e-9;
                      }});
  }
  bool all = true;
  for (const auto& ch : checks) {
    bool ok = false;
    std::string why;
    try {
      const auto res = pipeline::run(ch.cfg);
      ok = ch.pass(res.report);
      for (const auto& e : res.report.invariants) ok = ok && e.residual < 1e-6;
    } catch (const std::exception& e) {
      why = std::string(" (") + e.what() + ")";
    }
    std::cout << (ok ? "PASS " : "FAIL ") << ch.name << why << "\n";
    all = all && ok;
  }
  return all ? 0 : kExitNumeric;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Topological invariants of equivariant MPS families on symmetric triangulations"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "Worker threads (0 = hardware concurrency)")->check(CLI::NonNegativeNumber);

  auto* mesh = app.add_subcommand("mesh", "Write the symmetric sphere mesh as JSON");
  int dim = 3, refinements = 2, two_s = 1;
  std::string group, mesh_out;
  mesh->add_option("--dim", dim, "Sphere dimension (2 or 3)")->check(CLI::IsMember({2, 3}));
  mesh->add_option("--refinements", refinements, "Edge-midpoint refinements");
  mesh->add_option("--group", group, "Comma-separated generators acting on the mesh");
  mesh->add_option("--two-s", two_s, "Twice the spin, for the group representation");
  mesh->add_option("-o,--out", mesh_out, "Output file (default stdout)");

  auto* compute = app.add_subcommand("compute", "Run the invariants of a JSON config");
  std::string config_path;
  compute->add_option("config", config_path, "Config file")->required();

  auto* ingest = app.add_subcommand("ingest", "Evaluate a config on an external MPS family file");
  std::string family_path, ingest_config;
  ingest->add_option("family", family_path, "MPS family JSON")->required();
  ingest->add_option("config", ingest_config, "Config file (mesh, group, invariants, tolerances, output)")->required();

  app.add_subcommand("selftest", "Run a quick subset of the acceptance checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }
  numerics::set_num_threads(threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency()));

  try {
    if (mesh->parsed()) {
      pipeline::RunConfig cfg;
      cfg.dim = dim;
      cfg.refinements = refinements;
      cfg.model.type = dim == 2 ? "spin_field" : "dimer_spin_chain";
      cfg.model.two_s = two_s;
      cfg.group = split_names(group);
      const std::string text = pipeline::mesh_json(cfg);
      if (mesh_out.empty()) {
        std::cout << text;
      } else {
        write_file(mesh_out, text);
      }
      return 0;
    }
    if (compute->parsed() || ingest->parsed()) {
      auto cfg = pipeline::parse_config(read_file(compute->parsed() ? config_path : ingest_config));
      if (ingest->parsed()) {
        cfg.model.type = "ingest";
        cfg.model.path = family_path;
        pipeline::validate(cfg);
      }
      emit(cfg, pipeline::run(cfg));
      return 0;
    }
    return selftest();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return is_config_error(e.code()) ? kExitConfig : kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
}
