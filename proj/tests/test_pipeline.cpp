#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <nlohmann/json.hpp>

#include "hberry/io.hpp"
#include "hberry/pipeline.hpp"
#include "support.hpp"

using namespace hberry;
using json = nlohmann::json;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::PreconditionViolated;
}

pipeline::RunConfig dimer_config() {
  pipeline::RunConfig c;
  c.refinements = 1;
  c.group = {"T", "C2x", "C2y"};
  c.invariants = {"ddks", "cocycles", "mu_RP_T", "pump_C2x", "ddks_parity_T", "ddks_mod4_z2z2"};
  return c;
}

}  // namespace

TEST(IO, FamilyRoundTrip) {
  auto fam = fixtures::model_family(1, 1);
  const std::string text = io::family_to_json(fam);
  auto tensors = io::family_from_json(text, fam.mesh());
  ASSERT_EQ(tensors.size(), fam.tensors.size());
  for (std::size_t v = 0; v < tensors.size(); ++v) {
    EXPECT_NEAR(std::abs(mps::edge_overlap(tensors[v], fam.tensors[v]).mu), 1.0, 1e-12);
  }
  auto back = mps::build_family(fam.complex, tensors);
  EXPECT_LT((mps::flux3(back) - mps::flux3(fam)).max_abs(), 1e-12);
}

TEST(IO, FamilyErrors) {
  auto fam = fixtures::model_family(1, 1);
  auto j = json::parse(io::family_to_json(fam));
  auto small = gcomplex::build_sphere_complex(3, 0);
  EXPECT_EQ(code_of([&] { io::family_from_json(j.dump(), small); }), ErrorCode::MeshMismatch);
  auto bad = j;
  bad["schema_version"] = 7;
  EXPECT_EQ(code_of([&] { io::family_from_json(bad.dump(), fam.mesh()); }), ErrorCode::SchemaError);
  EXPECT_EQ(code_of([&] { io::family_from_json("{not json", fam.mesh()); }), ErrorCode::SchemaError);
  auto cat = j;
  for (auto& t : cat["vertices"][0]["tensors"]) {
    for (auto& row : t)
      for (auto& z : row) z = json::array({0.0, 0.0});
  }
  EXPECT_NE(code_of([&] { io::family_from_json(cat.dump(), fam.mesh()); }), ErrorCode::SchemaError);
}

TEST(IO, CochainCsv) {
  auto fam = fixtures::model_family(1, 1);
  const std::string csv = io::cochain_csv(fam.mesh(), fam.A01);
  EXPECT_EQ(csv.rfind("simplex_id,vertex_ids,value\n", 0), 0u);
  EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')), fam.mesh().count(1) + 1);
}

TEST(Pipeline, ParseConfig) {
  const std::string text = R"({"schema_version": 1, "model": {"type": "dimer_spin_chain", "two_s": 2},
    "mesh": {"refinements": 1}, "group": ["T"], "invariants": ["ddks"], "tolerances": {"gap_tol": 1e-5}})";
  auto c = pipeline::parse_config(text);
  EXPECT_EQ(c.model.two_s, 2);
  EXPECT_EQ(c.dim, 3);
  EXPECT_EQ(c.refinements, 1);
  EXPECT_DOUBLE_EQ(c.tol.gap_tol, 1e-5);
  EXPECT_EQ(code_of([] { pipeline::parse_config(R"({"schema_version": 1, "extra": 0})"); }), ErrorCode::ConfigError);
  EXPECT_EQ(code_of([] { pipeline::parse_config(R"({"schema_version": 2})"); }), ErrorCode::SchemaError);
}

TEST(Pipeline, ValidateRejects) {
  auto c = dimer_config();
  c.group = {"C2x"};
  EXPECT_EQ(code_of([&] { pipeline::validate(c); }), ErrorCode::ConfigError);
  c = dimer_config();
  c.invariants = {"chern"};
  EXPECT_EQ(code_of([&] { pipeline::validate(c); }), ErrorCode::ConfigError);
  c = dimer_config();
  c.group = {"Q4z", "C2x"};
  c.invariants = {"ddks"};
  c.refinements = 2;
  EXPECT_EQ(code_of([&] { pipeline::run(c); }), ErrorCode::ConfigError);
}

TEST(Pipeline, ReportAndDeterminism) {
  auto c = dimer_config();
  c.dump_dir = "dumps";
  c.family_path = "family.json";
  numerics::set_num_threads(1);
  auto a = pipeline::run(c);
  numerics::set_num_threads(4);
  auto b = pipeline::run(c);
  EXPECT_EQ(io::report_to_json(a.report), io::report_to_json(b.report));
  EXPECT_EQ(a.family_json, b.family_json);
  EXPECT_EQ(a.dumps.size(), 3u);
  auto j = json::parse(io::report_to_json(a.report));
  EXPECT_EQ(j["schema_version"], 1);
  EXPECT_EQ(j["mesh"]["num_top_simplices"], 128);
  EXPECT_EQ(j["invariants"][0]["name"], "ddks");
  EXPECT_EQ(j["invariants"][0]["value"], 1);
  EXPECT_TRUE(j["quality"].contains("max_cocycle_residual"));
}

TEST(Pipeline, IngestMatchesModel) {
  auto c = dimer_config();
  c.family_path = "family.json";
  auto a = pipeline::run(c);
  auto tmp = std::filesystem::temp_directory_path() / "hberry_ingest_test.json";
  {
    std::ofstream out(tmp);
    out << a.family_json;
  }
  auto d = c;
  d.model.type = "ingest";
  d.model.path = tmp.string();
  d.family_path.clear();
  auto b = pipeline::run(d);
  ASSERT_EQ(a.report.invariants.size(), b.report.invariants.size());
  for (std::size_t k = 0; k < a.report.invariants.size(); ++k) {
    EXPECT_EQ(a.report.invariants[k].name, b.report.invariants[k].name);
    EXPECT_NEAR(a.report.invariants[k].value, b.report.invariants[k].value, 1e-9);
  }
  std::filesystem::remove(tmp);
}

TEST(Pipeline, PureStateModels) {
  pipeline::RunConfig c;
  c.model.type = "spin_field";
  c.model.two_s = 2;
  c.dim = 2;
  c.group = {"c4"};
  c.invariants = {"chern", "chern_mod2", "chern_mod4"};
  auto r = pipeline::run(c);
  EXPECT_EQ(r.report.invariants[0].value, 2.0);
  c.model.type = "purestate_2x2";
  c.group.clear();
  c.invariants = {"xi_s2"};
  EXPECT_NEAR(pipeline::run(c).report.invariants[0].value, kPi, 1e-9);
}
