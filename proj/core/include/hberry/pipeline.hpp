#pragma once

#include <map>
#include <string>
#include <vector>

#include "hberry/io.hpp"
#include "hberry/mps.hpp"

namespace hberry::pipeline {

// type: dimer_spin_chain | spin_field | purestate_2x2 | ingest
struct ModelSpec {
  std::string type = "dimer_spin_chain";
  int two_s = 1;
  int sign = 1;      // purestate_2x2: representation of sigma
  std::string path;  // ingest: MPS family file
};

struct RunConfig {
  ModelSpec model;
  int dim = 3;
  int refinements = 2;
  std::vector<std::string> group;
  std::vector<std::string> invariants;
  mps::Tolerances tol;
  std::string report_path;
  std::string dump_dir;
  std::string family_path;  // export of the MPS family
};

// Parses and validates; throws ConfigError or SchemaError.
RunConfig parse_config(const std::string& json_text);
// Throws ConfigError for unknown models, names, or invariants the group or mesh cannot support.
void validate(const RunConfig& cfg);

// Invariant names accepted for a model type.
std::vector<std::string> supported_invariants(const std::string& model_type);

struct RunResult {
  io::InvariantReport report;
  std::map<std::string, std::string> dumps;  // file name -> CSV
  std::string family_json;
};

// Mesh JSON for cfg.dim and cfg.refinements with the action of cfg.group.
std::string mesh_json(const RunConfig& cfg);

// Validates, builds the mesh and family, and evaluates every requested invariant.
// Numerical assertion failures propagate as hberry::Error.
RunResult run(const RunConfig& cfg);

}  // namespace hberry::pipeline
