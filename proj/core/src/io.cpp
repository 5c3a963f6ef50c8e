#include "hberry/io.hpp"

#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

namespace hberry::io {

using json = nlohmann::ordered_json;

namespace {

json complex_pair(cd z) { return json::array({z.real(), z.imag()}); }

json tolerances_json(const mps::Tolerances& t) {
  json j;
  j["trunc_tol"] = t.trunc_tol;
  j["canon_tol"] = t.canon_tol;
  j["eig_tol"] = t.eig_tol;
  j["gap_tol"] = t.gap_tol;
  j["overlap_tol"] = t.overlap_tol;
  j["wilson_tol"] = t.wilson_tol;
  j["flux_guard"] = t.flux_guard;
  j["quantization_tol"] = t.quantization_tol;
  j["equiv_tol"] = t.equiv_tol;
  j["prop_tol"] = t.prop_tol;
  j["coc_tol"] = t.coc_tol;
  return j;
}

[[noreturn]] void schema(const std::string& what) { throw Error(ErrorCode::SchemaError, what); }

cd read_complex(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) schema(where + ": expected [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

std::string family_to_json(const mps::MPSFamily& fam, int indent) {
  json j;
  j["schema_version"] = kSchemaVersion;
  auto& verts = j["vertices"] = json::array();
  for (std::size_t v = 0; v < fam.tensors.size(); ++v) {
    const auto& t = fam.tensors[v];
    json jv;
    const RVec& x = fam.mesh().coord(static_cast<int>(v));
    jv["point"] = std::vector<double>(x.data(), x.data() + x.size());
    jv["n"] = t.n();
    jv["D"] = t.D();
    auto& ts = jv["tensors"] = json::array();
    for (const auto& a : t.A) {
      json m = json::array();
      for (int r = 0; r < a.rows(); ++r) {
        json row = json::array();
        for (int c = 0; c < a.cols(); ++c) row.push_back(complex_pair(a(r, c)));
        m.push_back(row);
      }
      ts.push_back(m);
    }
    jv["Lambda"] = std::vector<double>(t.lambda.data(), t.lambda.data() + t.lambda.size());
    verts.push_back(jv);
  }
  return j.dump(indent);
}

std::vector<mps::MPSTensor> family_from_json(const std::string& text, const gcomplex::GComplex& mesh,
                                             const mps::Tolerances& tol) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    schema(e.what());
  }
  if (!j.is_object() || !j.contains("schema_version") || j["schema_version"] != kSchemaVersion) {
    schema("schema_version must be " + std::to_string(kSchemaVersion));
  }
  if (!j.contains("vertices") || !j["vertices"].is_array()) schema("missing vertices array");
  const auto& verts = j["vertices"];
  if (verts.size() != mesh.num_vertices()) {
    throw Error(ErrorCode::MeshMismatch, std::to_string(verts.size()) + " vertices in file, " +
                                             std::to_string(mesh.num_vertices()) + " in mesh");
  }
  std::vector<std::vector<CMat>> raw(verts.size());
  for (std::size_t v = 0; v < verts.size(); ++v) {
    const auto& jv = verts[v];
    const std::string where = "vertex " + std::to_string(v);
    if (!jv.is_object() || !jv.contains("n") || !jv.contains("D") || !jv.contains("tensors")) {
      schema(where + ": needs n, D, tensors");
    }
    if (jv.contains("point")) {
      const auto p = jv["point"].get<std::vector<double>>();
      const RVec& x = mesh.coord(static_cast<int>(v));
      if (p.size() != static_cast<std::size_t>(x.size())) throw Error(ErrorCode::MeshMismatch, where + ": point dimension");
      for (std::size_t k = 0; k < p.size(); ++k) {
        if (std::abs(p[k] - x(static_cast<Eigen::Index>(k))) > 1e-9) throw Error(ErrorCode::MeshMismatch, where + ": point");
      }
    }
    const int n = jv["n"].get<int>(), D = jv["D"].get<int>();
    const auto& ts = jv["tensors"];
    if (n < 1 || D < 1 || !ts.is_array() || ts.size() != static_cast<std::size_t>(n)) schema(where + ": tensors must be n x D x D");
    for (int i = 0; i < n; ++i) {
      const auto& m = ts[static_cast<std::size_t>(i)];
      if (!m.is_array() || m.size() != static_cast<std::size_t>(D)) schema(where + ": tensors must be n x D x D");
      CMat a(D, D);
      for (int r = 0; r < D; ++r) {
        const auto& row = m[static_cast<std::size_t>(r)];
        if (!row.is_array() || row.size() != static_cast<std::size_t>(D)) schema(where + ": tensors must be n x D x D");
        for (int c = 0; c < D; ++c) a(r, c) = read_complex(row[static_cast<std::size_t>(c)], where);
      }
      raw[v].push_back(a);
    }
  }
  std::vector<mps::MPSTensor> out(raw.size());
  numerics::parallel_for(raw.size(), [&](std::size_t v) {
    try {
      out[v] = mps::right_canonicalize(raw[v], tol.trunc_tol, tol.gap_tol);
      mps::injectivity_check(out[v], tol.gap_tol, tol.canon_tol);
    } catch (const Error& e) {
      const ErrorCode code = e.code() == ErrorCode::NotInjective ? ErrorCode::NotInjective : ErrorCode::CanonicalizationFailed;
      throw Error(code, "vertex " + std::to_string(v) + ": " + e.detail());
    }
  });
  return out;
}

std::string cochain_csv(const gcomplex::GComplex& mesh, const gcomplex::Cochain& f, std::size_t tuple) {
  std::ostringstream os;
  os.precision(17);
  os << "simplex_id,vertex_ids,value\n";
  for (std::size_t s = 0; s < f.nsimp(); ++s) {
    os << s << ',';
    const auto& sv = mesh.simplex(f.q(), s);
    for (std::size_t k = 0; k < sv.size(); ++k) os << (k ? " " : "") << sv[k];
    os << ',' << f.at(tuple, s) << '\n';
  }
  return os.str();
}

std::string report_to_json(const InvariantReport& r, int indent) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["model"] = r.model;
  if (r.two_s > 0) j["two_s"] = r.two_s;
  json mesh;
  mesh["dim"] = r.dim;
  mesh["refinements"] = r.refinements;
  mesh["num_vertices"] = r.num_vertices;
  mesh["num_top_simplices"] = r.num_top_simplices;
  j["mesh"] = mesh;
  j["group"] = r.group;
  j["tolerances"] = tolerances_json(r.tolerances);
  json q;
  if (r.has_gap) q["min_eigen_gap"] = r.min_gap;
  if (r.has_cocycles) q["max_cocycle_residual"] = r.max_cocycle_residual;
  j["quality"] = q;
  auto& inv = j["invariants"] = json::array();
  for (const auto& e : r.invariants) {
    json je;
    je["name"] = e.name;
    je["kind"] = e.kind;
    if (e.kind == "integer") {
      je["value"] = std::llround(e.value);
    } else {
      je["value"] = e.value;
    }
    if (e.has_direct) je["direct"] = e.direct;
    je["residual"] = e.residual;
    inv.push_back(je);
  }
  return j.dump(indent) + "\n";
}

}  // namespace hberry::io
