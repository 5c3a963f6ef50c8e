#pragma once

#include <string>
#include <vector>

#include "hberry/gcomplex.hpp"
#include "hberry/mps.hpp"

namespace hberry::io {

inline constexpr int kSchemaVersion = 1;

// {"schema_version", "vertices": [{"point", "n", "D", "tensors": n x D x D [re, im], "Lambda"}]}
std::string family_to_json(const mps::MPSFamily& fam, int indent = 1);

// Tensors are re-canonicalized and checked for injectivity; vertex count and points must match the mesh.
std::vector<mps::MPSTensor> family_from_json(const std::string& text, const gcomplex::GComplex& mesh,
                                             const mps::Tolerances& tol = {});

// Columns simplex_id, vertex_ids, value for one group tuple of a cochain.
std::string cochain_csv(const gcomplex::GComplex& mesh, const gcomplex::Cochain& f, std::size_t tuple = 0);

struct ReportEntry {
  std::string name;
  std::string kind;  // "integer" or "angle"
  double value = 0.0;
  double residual = 0.0;  // distance to the quantized value, or to the direct side of a relation
  bool has_direct = false;
  double direct = 0.0;
};

struct InvariantReport {
  std::string model;
  int two_s = 0;
  int dim = 0;
  int refinements = 0;
  std::vector<std::string> group;
  mps::Tolerances tolerances;
  std::size_t num_vertices = 0;
  std::size_t num_top_simplices = 0;
  bool has_gap = false;
  double min_gap = 0.0;
  double max_cocycle_residual = 0.0;
  bool has_cocycles = false;
  std::vector<ReportEntry> invariants;
};

std::string report_to_json(const InvariantReport& r, int indent = 2);

}  // namespace hberry::io
