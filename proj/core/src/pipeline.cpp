#include "hberry/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <optional>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hberry/equivariant.hpp"
#include "hberry/models.hpp"
#include "hberry/purestate.hpp"

namespace hberry::pipeline {

using json = nlohmann::json;
using gcomplex::GComplex;
using gcomplex::NamedChains;

namespace {

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorCode::ConfigError, what); }

bool is_mps_model(const std::string& t) { return t == "dimer_spin_chain" || t == "ingest"; }

const std::vector<std::string>& model_types() {
  static const std::vector<std::string> t = {"dimer_spin_chain", "spin_field", "purestate_2x2", "ingest"};
  return t;
}

// Group elements each invariant needs.
const std::map<std::string, std::vector<std::string>>& mps_requirements() {
  static const std::map<std::string, std::vector<std::string>> r = {
      {"ddks", {}},
      {"cocycles", {}},
      {"mu_RP_T", {"T"}},
      {"mu_T_C2x_C2y", {"C2x", "C2y"}},
      {"pump_C2x", {"C2x"}},
      {"pump_fixed_point", {"C2x", "C2y"}},
      {"gamma2", {}},
      {"gamma2_fixed_point", {"T"}},
      {"ddks_parity_berry", {}},
      {"ddks_mod2_pump", {"C2z"}},
      {"ddks_mod4_pump", {"Q4z"}},
      {"ddks_parity_T", {"T"}},
      {"ddks_mod4_z2z2", {"C2x", "C2y"}},
      {"ddks_parity_z2z2", {"C2x", "C2y"}},
  };
  return r;
}

const std::map<std::string, std::vector<std::string>>& pure_requirements(const std::string& type) {
  static const std::map<std::string, std::vector<std::string>> spin = {
      {"chern", {}}, {"chern_mod2", {"c2"}}, {"chern_mod4", {"c4"}}, {"descendant", {}}};
  static const std::map<std::string, std::vector<std::string>> two = {
      {"chern", {}}, {"xi_s2", {"sigma"}}, {"descendant", {"sigma"}}};
  return type == "spin_field" ? spin : two;
}

const std::map<std::string, std::vector<std::string>>& requirements(const std::string& type) {
  return is_mps_model(type) ? mps_requirements() : pure_requirements(type);
}

std::shared_ptr<const GroupData> make_group(const RunConfig& cfg, const std::vector<std::string>& names) {
  const auto& t = cfg.model.type;
  if (t == "purestate_2x2") return purestate::two_level_group(cfg.model.sign);
  if (names.empty()) return nullptr;
  if (t == "spin_field") return purestate::spin_field_group(names, cfg.model.two_s);
  return models::model_group(names, cfg.model.two_s);
}

// Element of grp equal to the named generator, or nullopt.
std::optional<int> resolve(const RunConfig& cfg, const GroupData& grp, const std::string& name) {
  if (cfg.model.type == "purestate_2x2") {
    if (name == "sigma") return 1;
    return std::nullopt;
  }
  std::shared_ptr<const GroupData> single;
  try {
    single = make_group(cfg, {name});
  } catch (const Error&) {
    return std::nullopt;
  }
  const int k = grp.find(single->param(1), single->u(1), single->phi(1));
  if (k < 0) return std::nullopt;
  return k;
}

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) config_error(where + " must be an object");
  for (const auto& [k, v] : j.items()) {
    if (!allowed.count(k)) config_error("unknown key " + where + "." + k);
  }
}

template <typename T>
T get(const json& j, const std::string& key, const std::string& where) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    config_error(where + "." + key + " has the wrong type");
  }
}

GComplex acted_mesh(const RunConfig& cfg, const std::shared_ptr<const GroupData>& grp) {
  GComplex base = gcomplex::build_sphere_complex(cfg.dim, cfg.refinements);
  if (!grp) return base;
  try {
    return gcomplex::attach_action(base, grp);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NotSimplicial) config_error("group does not act simplicially on this mesh: " + e.detail());
    throw;
  }
}

double dist_to_z2(double a) { return std::min(numerics::angle_distance(a, 0.0), numerics::angle_distance(a, kPi)); }

}  // namespace

std::vector<std::string> supported_invariants(const std::string& model_type) {
  if (std::find(model_types().begin(), model_types().end(), model_type) == model_types().end()) {
    config_error("unknown model type " + model_type);
  }
  std::vector<std::string> out;
  for (const auto& [k, v] : requirements(model_type)) out.push_back(k);
  return out;
}

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::SchemaError, e.what());
  }
  check_keys(j, {"schema_version", "model", "mesh", "group", "invariants", "tolerances", "output"}, "config");
  if (!j.contains("schema_version") || j["schema_version"] != io::kSchemaVersion) {
    throw Error(ErrorCode::SchemaError, "schema_version must be " + std::to_string(io::kSchemaVersion));
  }
  RunConfig cfg;
  if (!j.contains("model")) config_error("missing model");
  const auto& m = j["model"];
  check_keys(m, {"type", "two_s", "sign", "path"}, "model");
  cfg.model.type = get<std::string>(m, "type", "model");
  if (m.contains("two_s")) cfg.model.two_s = get<int>(m, "two_s", "model");
  if (m.contains("sign")) cfg.model.sign = get<int>(m, "sign", "model");
  if (m.contains("path")) cfg.model.path = get<std::string>(m, "path", "model");
  cfg.dim = (cfg.model.type == "spin_field" || cfg.model.type == "purestate_2x2") ? 2 : 3;
  if (j.contains("mesh")) {
    const auto& me = j["mesh"];
    check_keys(me, {"dim", "refinements"}, "mesh");
    if (me.contains("dim")) cfg.dim = get<int>(me, "dim", "mesh");
    if (me.contains("refinements")) cfg.refinements = get<int>(me, "refinements", "mesh");
  }
  if (j.contains("group")) cfg.group = get<std::vector<std::string>>(j, "group", "config");
  if (j.contains("invariants")) cfg.invariants = get<std::vector<std::string>>(j, "invariants", "config");
  if (j.contains("tolerances")) {
    const auto& t = j["tolerances"];
    const std::map<std::string, double*> slots = {
        {"trunc_tol", &cfg.tol.trunc_tol},   {"canon_tol", &cfg.tol.canon_tol},
        {"eig_tol", &cfg.tol.eig_tol},       {"gap_tol", &cfg.tol.gap_tol},
        {"overlap_tol", &cfg.tol.overlap_tol}, {"wilson_tol", &cfg.tol.wilson_tol},
        {"flux_guard", &cfg.tol.flux_guard}, {"quantization_tol", &cfg.tol.quantization_tol},
        {"equiv_tol", &cfg.tol.equiv_tol},   {"prop_tol", &cfg.tol.prop_tol},
        {"coc_tol", &cfg.tol.coc_tol}};
    if (!t.is_object()) config_error("tolerances must be an object");
    for (const auto& [k, v] : t.items()) {
      auto it = slots.find(k);
      if (it == slots.end()) config_error("unknown tolerance " + k);
      if (!v.is_number() || v.get<double>() <= 0.0) config_error("tolerance " + k + " must be a positive number");
      *it->second = v.get<double>();
    }
  }
  if (j.contains("output")) {
    const auto& o = j["output"];
    check_keys(o, {"report", "dumps", "family"}, "output");
    if (o.contains("report")) cfg.report_path = get<std::string>(o, "report", "output");
    if (o.contains("dumps")) cfg.dump_dir = get<std::string>(o, "dumps", "output");
    if (o.contains("family")) cfg.family_path = get<std::string>(o, "family", "output");
  }
  validate(cfg);
  return cfg;
}

void validate(const RunConfig& cfg) {
  const auto& t = cfg.model.type;
  if (std::find(model_types().begin(), model_types().end(), t) == model_types().end()) {
    config_error("unknown model type " + t);
  }
  const int want_dim = is_mps_model(t) ? 3 : 2;
  if (cfg.dim != want_dim) config_error(t + " lives on S" + std::to_string(want_dim));
  if (cfg.refinements < 0 || cfg.refinements > 4) config_error("refinements must be in [0, 4]");
  if (cfg.model.two_s < 1 || cfg.model.two_s > 8) config_error("two_s must be in [1, 8]");
  if (t == "purestate_2x2") {
    if (cfg.model.sign != 1 && cfg.model.sign != -1) config_error("sign must be +1 or -1");
    if (!cfg.group.empty()) config_error("purestate_2x2 has the fixed group {e, sigma}");
  }
  if (t == "ingest" && cfg.model.path.empty()) config_error("ingest needs model.path");
  if (!cfg.family_path.empty() && !is_mps_model(t)) config_error("family export needs an MPS model");
  std::shared_ptr<const GroupData> grp;
  try {
    grp = make_group(cfg, cfg.group);
  } catch (const Error& e) {
    config_error("group: " + e.detail());
  }
  const auto& req = requirements(t);
  std::set<std::string> seen;
  for (const auto& inv : cfg.invariants) {
    auto it = req.find(inv);
    if (it == req.end()) config_error("invariant " + inv + " is not available for " + t);
    if (!seen.insert(inv).second) config_error("invariant " + inv + " requested twice");
    if (inv == "cocycles" && !grp) config_error("cocycles need a nonempty group");
    for (const auto& name : it->second) {
      if (!grp || !resolve(cfg, *grp, name)) config_error("invariant " + inv + " needs group element " + name);
    }
  }
}

std::string mesh_json(const RunConfig& cfg) {
  RunConfig c = cfg;
  c.invariants.clear();
  validate(c);
  const auto grp = make_group(c, c.group);
  return gcomplex::mesh_to_json(acted_mesh(c, grp)) + "\n";
}

RunResult run(const RunConfig& cfg) {
  validate(cfg);
  const auto grp = make_group(cfg, cfg.group);
  auto mesh = std::make_shared<const GComplex>(acted_mesh(cfg, grp));
  const NamedChains dom = gcomplex::standard_domains(*mesh);
  auto chain = [&](const std::string& n) -> const gcomplex::Chain& { return dom.at(n); };
  auto vertex = [&](const std::string& n) { return chain(n).terms().begin()->first; };
  auto elem = [&](const std::string& n) { return *resolve(cfg, *grp, n); };
  const auto& tol = cfg.tol;

  RunResult res;
  auto& rep = res.report;
  rep.model = cfg.model.type;
  rep.two_s = cfg.model.type == "purestate_2x2" ? 0 : cfg.model.two_s;
  rep.dim = cfg.dim;
  rep.refinements = cfg.refinements;
  rep.group = cfg.group;
  rep.tolerances = tol;
  rep.num_vertices = mesh->num_vertices();
  rep.num_top_simplices = mesh->count(cfg.dim);

  auto add_angle = [&](const std::string& name, numerics::Angle a, bool quantized) {
    rep.invariants.push_back({name, "angle", a.value(), quantized ? dist_to_z2(a.value()) : 0.0, false, 0.0});
  };
  auto add_fixed = [&](const std::string& name, const mps::FixedPointValue& f) {
    rep.invariants.push_back({name, "angle", f.value.value(), f.mismatch, true, f.direct.value()});
  };
  auto add_integer = [&](const std::string& name, const mps::QuantizedResult& q) {
    if (q.residual > tol.quantization_tol) {
      throw Error(ErrorCode::NotQuantized, name + " residual " + std::to_string(q.residual));
    }
    rep.invariants.push_back({name, "integer", static_cast<double>(q.value), q.residual, false, 0.0});
  };
  auto add_residual = [&](const std::string& name, double r, double bound) {
    if (r > bound) throw Error(ErrorCode::EquivarianceViolated, name + " residual " + std::to_string(r));
    rep.invariants.push_back({name, "residual", r, r, false, 0.0});
  };

  if (is_mps_model(cfg.model.type)) {
    mps::MPSFamily fam;
    if (cfg.model.type == "dimer_spin_chain") {
      fam = models::model_family(mesh, cfg.model.two_s, tol);
    } else {
      std::ifstream in(cfg.model.path);
      if (!in) config_error("cannot read " + cfg.model.path);
      std::stringstream ss;
      ss << in.rdbuf();
      fam = mps::build_family(mesh, io::family_from_json(ss.str(), *mesh, tol), tol);
    }
    rep.has_gap = true;
    rep.min_gap = fam.min_gap();
    std::optional<equivariant::EquivariantData> eq;
    auto need_eq = [&]() -> const equivariant::EquivariantData& {
      if (!eq) {
        eq = equivariant::build_equivariant(fam, tol);
        rep.has_cocycles = true;
        rep.max_cocycle_residual = equivariant::cocycle_residuals(fam, *eq).max();
      }
      return *eq;
    };
    for (const auto& inv : cfg.invariants) {
      if (inv == "ddks") {
        add_integer(inv, mps::ddks(fam, chain("S3"), tol));
      } else if (inv == "cocycles") {
        const auto r = equivariant::cocycle_residuals(fam, need_eq());
        add_residual("cocycle delta_A10", r.delta_A10, tol.coc_tol);
        add_residual("cocycle delta_A01_d_A10", r.delta_A01_d_A10, tol.coc_tol);
        add_residual("cocycle delta_A02_d_A11", r.delta_A02_d_A11, tol.coc_tol);
        add_residual("cocycle delta_A11_d_A20", r.delta_A11_d_A20, tol.coc_tol);
        add_residual("cocycle delta_A20", r.delta_A20, tol.coc_tol);
      } else if (inv == "mu_RP_T") {
        for (const char* p : {"P+", "P-"}) {
          add_angle(inv + "(" + p + ")", equivariant::mu_RP(fam, need_eq(), elem("T"), vertex(p), tol), true);
        }
      } else if (inv == "mu_T_C2x_C2y") {
        for (const char* p : {"P+", "P-"}) {
          add_angle(inv + "(" + p + ")",
                    equivariant::mu_T(fam, need_eq(), elem("C2x"), elem("C2y"), vertex(p), tol), true);
        }
      } else if (inv == "pump_C2x") {
        add_angle(inv, equivariant::pump_eta(fam, need_eq(), elem("C2x"), chain("pump_loop"), tol), true);
      } else if (inv == "pump_fixed_point") {
        add_fixed(inv, equivariant::pump_fixed_point(fam, need_eq(), elem("C2x"), elem("C2y"), chain("D1"), tol));
      } else if (inv == "gamma2") {
        const auto stab = grp ? resolve(cfg, *grp, "C2zT") : std::nullopt;
        add_angle(inv, equivariant::gamma2(fam, chain("equator"), stab.value_or(-1), tol), stab.has_value());
      } else if (inv == "gamma2_fixed_point") {
        add_fixed(inv, equivariant::gamma2_fixed_point(fam, need_eq(), elem("T"), chain("D2"), chain("D1"), tol));
      } else if (inv == "ddks_parity_berry") {
        add_fixed(inv, equivariant::ddks_parity_berry(fam, dom, tol));
      } else if (inv == "ddks_mod2_pump") {
        add_fixed(inv, equivariant::ddks_mod_n_pump(fam, need_eq(), elem("C2z"), 2, chain("C2z_D3"), chain("C2z_D2"), tol));
      } else if (inv == "ddks_mod4_pump") {
        add_fixed(inv, equivariant::ddks_mod_n_pump(fam, need_eq(), elem("Q4z"), 4, chain("C4z_D3"), chain("C4z_D2"), tol));
      } else if (inv == "ddks_parity_T") {
        add_fixed(inv, equivariant::ddks_parity_T(fam, need_eq(), elem("T"), dom, tol));
      } else if (inv == "ddks_mod4_z2z2") {
        add_fixed(inv, equivariant::ddks_mod4_z2z2(fam, need_eq(), elem("C2x"), elem("C2y"), dom, tol));
      } else if (inv == "ddks_parity_z2z2") {
        add_fixed(inv, equivariant::ddks_parity_z2z2(fam, need_eq(), elem("C2x"), elem("C2y"), dom, tol));
      }
    }
    if (!cfg.dump_dir.empty()) {
      res.dumps["A01.csv"] = io::cochain_csv(*mesh, fam.A01);
      res.dumps["A02.csv"] = io::cochain_csv(*mesh, fam.A02);
      res.dumps["F3.csv"] = io::cochain_csv(*mesh, mps::flux3(fam));
    }
    if (!cfg.family_path.empty()) res.family_json = io::family_to_json(fam);
  } else {
    const auto fam = cfg.model.type == "spin_field" ? purestate::spin_field_family(mesh, cfg.model.two_s)
                                                    : purestate::two_level_family(mesh);
    for (const auto& inv : cfg.invariants) {
      if (inv == "chern") {
        add_integer(inv, purestate::chern(fam, chain("S2"), tol));
      } else if (inv == "chern_mod2") {
        add_fixed(inv, purestate::chern_mod_n(fam, elem("c2"), 2, chain("W2"), chain("W2_C"), tol));
      } else if (inv == "chern_mod4") {
        add_fixed(inv, purestate::chern_mod_n(fam, elem("c4"), 4, chain("W4"), chain("W4_C"), tol));
      } else if (inv == "xi_s2") {
        add_angle(inv, purestate::xi_s2(fam, elem("sigma"), chain("D"), chain("C"), vertex("P"), tol), true);
      } else if (inv == "descendant") {
        add_residual(inv, purestate::descendant_residual(fam), tol.coc_tol);
      }
    }
    if (!cfg.dump_dir.empty()) {
      const auto A = purestate::berry_connection(fam, tol.overlap_tol);
      res.dumps["A01.csv"] = io::cochain_csv(*mesh, A);
      res.dumps["F2.csv"] = io::cochain_csv(*mesh, purestate::berry_flux(*mesh, A));
    }
  }
  return res;
}

}  // namespace hberry::pipeline
