#include <gtest/gtest.h>

#include <random>

#include "hberry/equivariant.hpp"
#include "hberry/synthetic.hpp"
#include "support.hpp"

using namespace hberry;
using namespace hberry::equivariant;

namespace {

double adist(const Angle& a, double b) { return numerics::angle_distance(a.value(), b); }

}  // namespace

TEST(Equivariant, CocyclesVanish) {
  for (int two_s : {1, 2}) {
    auto fam = fixtures::model_family(1, two_s, {"T", "C2x", "C2y"});
    auto eq = build_equivariant(fam);
    auto r = cocycle_residuals(fam, eq);
    EXPECT_LT(r.delta_A10, 1e-8);
    EXPECT_LT(r.delta_A01_d_A10, 1e-8);
    EXPECT_LT(r.delta_A02_d_A11, 1e-8);
    EXPECT_LT(r.delta_A11_d_A20, 1e-8);
    EXPECT_LT(r.delta_A20, 1e-8);
    EXPECT_LT(eq.max_unitarity_defect, 1e-8);
  }
}

TEST(Equivariant, IdentityDataIsTrivial) {
  auto fam = fixtures::model_family(1, 1, {"T"});
  auto eq = build_equivariant(fam);
  const int e = 0;
  for (std::size_t v = 0; v < fam.mesh().num_vertices(); ++v) {
    EXPECT_LT(numerics::angle_distance(eq.A10.at(eq.A10.tuple({e}), v), 0.0), 1e-10);
  }
  EXPECT_LT(numerics::angle_distance(eq.A20.at(eq.A20.tuple({e, e}), 0), 0.0), 1e-10);
}

TEST(Equivariant, GaugeOrbit) {
  auto fam = fixtures::model_family(1, 1, {"T", "C2x", "C2y"});
  auto eq = build_equivariant(fam);
  auto dom = gcomplex::standard_domains(fam.mesh());
  const auto& g = fam.mesh().group();
  const int T = g.find("T"), x = g.find("C2x"), y = g.find("C2y");
  const int Pp = fixtures::first_vertex(dom.at("P+"));
  std::mt19937_64 rng(4);
  for (int k = 0; k < 5; ++k) {
    auto gt = random_gauge(fam, g.order(), rng);
    auto gf = gauge_family(fam, gt);
    auto ge = gauge_equivariant(gf, eq, gt);
    EXPECT_LT(cocycle_residuals(gf, ge).max(), 1e-8);
    EXPECT_LT(adist(mu_RP(gf, ge, T, Pp), mu_RP(fam, eq, T, Pp).value()), 1e-9);
    EXPECT_LT(adist(mu_T(gf, ge, x, y, Pp), mu_T(fam, eq, x, y, Pp).value()), 1e-9);
    EXPECT_LT(adist(pump_eta(gf, ge, x, dom.at("pump_loop")), pump_eta(fam, eq, x, dom.at("pump_loop")).value()), 1e-9);
    EXPECT_LT(adist(ddks_mod4_z2z2(gf, ge, x, y, dom).value, ddks_mod4_z2z2(fam, eq, x, y, dom).value.value()), 1e-9);
  }
}

TEST(Equivariant, FluxIsEquivariant) {
  auto fam = fixtures::model_family(1, 1, {"T", "C2x", "C2y"});
  const auto F = mps::flux3(fam);
  const auto& c = fam.mesh();
  for (int g = 0; g < c.group().order(); ++g) {
    for (std::size_t s = 0; s < c.count(3); ++s) {
      const auto r = c.act(g, 3, s);
      EXPECT_NEAR(F.at(0, r), c.group().phi(g) * F.at(0, s), 1e-9);
    }
  }
}

TEST(Equivariant, PumpIsARepresentation) {
  // Q4z and its square C2z both fix the n0-n3 circle.
  for (int two_s : {1, 2}) {
    auto fam = fixtures::model_family(1, two_s, {"Q4z"});
    auto eq = build_equivariant(fam);
    const auto& c = fam.mesh();
    std::vector<int> verts;
    for (const auto& p : fixtures::circle_points(0, 3, 8)) verts.push_back(c.find_vertex(p));
    verts.push_back(verts.front());
    auto loop = gcomplex::path_chain(c, verts);
    const int q = c.group().find("Q4z"), q2 = c.group().mul(q, q), q3 = c.group().mul(q2, q);
    const double eq1 = pump_eta(fam, eq, q, loop).value();
    EXPECT_LT(adist(pump_eta(fam, eq, q2, loop), 2 * eq1), 1e-9);
    EXPECT_LT(adist(pump_eta(fam, eq, q3, loop), 3 * eq1), 1e-9);
    EXPECT_LT(adist(pump_eta(fam, eq, 0, loop), 0.0), 1e-9);
    // The sign of eta_Q4z follows the loop orientation.
    EXPECT_LT(std::min(adist(Angle(eq1), kPi * two_s / 2), adist(Angle(eq1), -kPi * two_s / 2)), 1e-6);
    EXPECT_LT(adist(pump_eta(fam, eq, q2, loop), kPi * two_s), 1e-6);
  }
}

TEST(Equivariant, SolitonChargeMatchesPumpOnTwelveSites) {
  for (int two_s : {1, 2}) {
    auto fam = fixtures::ring_family(fixtures::circle_points(0, 1, 12), two_s, {"C2x"});
    auto eq = build_equivariant(fam);
    const int x = fam.mesh().group().find("C2x");
    const double eta = pump_eta(fam, eq, x, fixtures::closed_path(fam.mesh(), 12)).value();
    const double q = mps::soliton_charge(fam, fixtures::ring_order(12), x);
    EXPECT_LT(numerics::angle_distance(q, eta), 1e-6);
    EXPECT_LT(numerics::angle_distance(eta, two_s == 1 ? kPi : 0.0), 1e-6);
  }
}

TEST(Equivariant, ModelValues) {
  for (int two_s : {1, 2}) {
    auto fam = fixtures::model_family(1, two_s, {"T", "C2x", "C2y"});
    auto eq = build_equivariant(fam);
    auto dom = gcomplex::standard_domains(fam.mesh());
    const auto& g = fam.mesh().group();
    const int T = g.find("T"), x = g.find("C2x"), y = g.find("C2y");
    const double expect = two_s == 1 ? kPi : 0.0;
    EXPECT_LT(adist(mu_RP(fam, eq, T, fixtures::first_vertex(dom.at("P+"))), expect), 1e-6);
    EXPECT_LT(adist(mu_RP(fam, eq, T, fixtures::first_vertex(dom.at("P-"))), 0.0), 1e-6);
    EXPECT_LT(adist(pump_eta(fam, eq, x, dom.at("pump_loop")), expect), 1e-6);
    EXPECT_LT(pump_fixed_point(fam, eq, x, y, dom.at("D1")).mismatch, 1e-6);
    EXPECT_LT(gamma2_fixed_point(fam, eq, T, dom.at("D2"), dom.at("D1")).mismatch, 1e-6);
  }
}

TEST(Equivariant, NotFixedRejected) {
  auto fam = fixtures::model_family(1, 1, {"T", "C2x", "C2y"});
  auto eq = build_equivariant(fam);
  const auto& c = fam.mesh();
  RVec p(4);
  p << 0.0, 1.0, 0.0, 0.0;
  EXPECT_THROW(mu_RP(fam, eq, c.group().find("T"), c.find_vertex(p)), Error);
}

TEST(Synthetic, GluedFamilyXi) {
  for (int two_s : {1, 2}) {
    auto fam = synthetic::glued_family(2, two_s);
    EXPECT_EQ(mps::ddks(fam, fam.mesh().fundamental_class()).value, 0);
    auto eq = build_equivariant(fam);
    EXPECT_LT(cocycle_residuals(fam, eq).max(), 1e-8);
    auto dom = gcomplex::standard_domains(fam.mesh());
    const int s = fam.mesh().group().find("sigma");
    const double xi = xi_s3(fam, eq, s, dom).value();
    EXPECT_LT(std::min(adist(Angle(xi), 0.0), adist(Angle(xi), kPi)), 1e-6);
    std::mt19937_64 rng(8);
    for (int k = 0; k < 3; ++k) {
      auto gt = random_gauge(fam, 2, rng);
      auto gf = gauge_family(fam, gt);
      EXPECT_LT(adist(xi_s3(gf, gauge_equivariant(gf, eq, gt), s, dom), xi), 1e-9);
    }
  }
}

TEST(Synthetic, CylinderAndTorusGaugeInvariant) {
  std::mt19937_64 rng(6);
  auto cy = synthetic::cylinder_family(16, 3);
  auto ce = build_equivariant(cy.fam);
  EXPECT_LT(cocycle_residuals(cy.fam, ce).max(), 1e-8);
  const double vc = free_action_gamma2_cylinder(cy.fam, ce, cy.s1, cy.strip, cy.base).value();
  auto to = synthetic::torus_family(16, 5);
  auto te = build_equivariant(to.fam);
  EXPECT_LT(cocycle_residuals(to.fam, te).max(), 1e-8);
  const double vt = free_action_gamma2_torus(to.fam, te, to.s1, to.s2, to.plaquette, to.bottom, to.left).value();
  for (int k = 0; k < 3; ++k) {
    auto gc = random_gauge(cy.fam, 2, rng);
    auto fc = gauge_family(cy.fam, gc);
    EXPECT_LT(adist(free_action_gamma2_cylinder(fc, gauge_equivariant(fc, ce, gc), cy.s1, cy.strip, cy.base), vc), 1e-9);
    auto gt = random_gauge(to.fam, 4, rng);
    auto ft = gauge_family(to.fam, gt);
    EXPECT_LT(adist(free_action_gamma2_torus(ft, gauge_equivariant(ft, te, gt), to.s1, to.s2, to.plaquette, to.bottom, to.left),
                    vt),
              1e-9);
  }
}
