#pragma once

#include <random>
#include <vector>

#include "hberry/gcomplex.hpp"
#include "hberry/mps.hpp"

namespace hberry::equivariant {

using gcomplex::Chain;
using gcomplex::Cochain;
using gcomplex::NamedChains;
using mps::FixedPointValue;
using mps::MPSFamily;
using mps::Tolerances;
using numerics::Angle;

// A^i -> sum_j u_ij (A^j)^phi.
mps::MPSTensor transform_mps(const GroupData& group, int g, const mps::MPSTensor& t);

// g . A(t) = exp(i A10_g(t)) V_g(t)^+ A(g t) V_g(t) up to the site gauge, with the tower
// V_g(h t) V_h(t)^phi_g = exp(i A20_{g,h}(t)) V_gh(t) and V_g X^phi V_g^+ = exp(i A11_g) X(g edge).
struct EquivariantData {
  int group_order = 1;
  std::size_t num_vertices = 0;
  std::vector<CMat> V;  // [g * num_vertices + vertex]
  Cochain A10, A11, A20;
  double max_unitarity_defect = 0.0;
  double min_transfer_modulus = 1.0;

  const CMat& v(int g, int vertex) const {
    return V[static_cast<std::size_t>(g) * num_vertices + static_cast<std::size_t>(vertex)];
  }
};

EquivariantData build_equivariant(const MPSFamily& fam, const Tolerances& tol = {});

// A11 and A20 from given V and A10.
EquivariantData complete_equivariant(const MPSFamily& fam, std::vector<CMat> V, Cochain A10, const Tolerances& tol = {});

struct CocycleResiduals {
  double delta_A10 = 0.0;           // delta A10
  double delta_A01_d_A10 = 0.0;     // delta A01 - d A10
  double delta_A02_d_A11 = 0.0;     // delta A02 - d A11
  double delta_A11_d_A20 = 0.0;     // delta A11 + d A20
  double delta_A20 = 0.0;           // delta A20
  double max() const;
};

CocycleResiduals cocycle_residuals(const MPSFamily& fam, const EquivariantData& eq);

// A20_{g,h} - A20_{h,g}; g, h unitary, commuting, fixing tau.
Angle mu_T(const MPSFamily& fam, const EquivariantData& eq, int g, int h, int tau, const Tolerances& tol = {});
// A20_{a,a}; a antiunitary, a^2 = e, fixing tau.
Angle mu_RP(const MPSFamily& fam, const EquivariantData& eq, int a, int tau, const Tolerances& tol = {});
// A20_{a,g^-1} + A20_{g,g^-1} - A20_{g,a}; phi_a = -1, phi_g = 1, a g^-1 = g a.
Angle mu_KB(const MPSFamily& fam, const EquivariantData& eq, int a, int g, int tau, const Tolerances& tol = {});

// (A11_g, loop) for g unitary fixing every vertex of the loop.
Angle pump_eta(const MPSFamily& fam, const EquivariantData& eq, int g, const Chain& loop, const Tolerances& tol = {});

// mu_T_{g,h}(Q) - mu_T_{g,h}(P) against pump_eta on C - hC, dC = Q - P.
FixedPointValue pump_fixed_point(const MPSFamily& fam, const EquivariantData& eq, int g, int h, const Chain& C,
                                 const Tolerances& tol = {});

// Sum of A02 over a closed surface; quantized to {0, pi} when an antiunitary element fixing it is given.
Angle gamma2(const MPSFamily& fam, const Chain& surface, int stabilizer = -1, const Tolerances& tol = {});

// mu_RP_b(P) - mu_RP_b(Q) against gamma2 on D + bD, with dD = C - bC and dC = Q - P.
FixedPointValue gamma2_fixed_point(const MPSFamily& fam, const EquivariantData& eq, int b, const Chain& D,
                                   const Chain& C, const Tolerances& tol = {});

// Relations between the DDKS number on S3 and lower invariants; direct = the DDKS side.
FixedPointValue ddks_parity_berry(const MPSFamily& fam, const NamedChains& domains, const Tolerances& tol = {});
FixedPointValue ddks_mod_n_pump(const MPSFamily& fam, const EquivariantData& eq, int cn, int n, const Chain& D3,
                                const Chain& D2, const Tolerances& tol = {});
FixedPointValue ddks_parity_T(const MPSFamily& fam, const EquivariantData& eq, int T, const NamedChains& domains,
                              const Tolerances& tol = {});
FixedPointValue ddks_mod4_z2z2(const MPSFamily& fam, const EquivariantData& eq, int x, int y,
                               const NamedChains& domains, const Tolerances& tol = {});
FixedPointValue ddks_parity_z2z2(const MPSFamily& fam, const EquivariantData& eq, int x, int y,
                                 const NamedChains& domains, const Tolerances& tol = {});

// Z2 invariant of a free antiunitary antipodal action on S3.
Angle xi_s3(const MPSFamily& fam, const EquivariantData& eq, int sigma, const NamedChains& domains,
            const Tolerances& tol = {});

// (A02, strip) + (A11_s1, base) with d strip = s1 base - base.
Angle free_action_gamma2_cylinder(const MPSFamily& fam, const EquivariantData& eq, int s1, const Chain& strip,
                                  const Chain& base);
// (A02, P) + (A11_s1, bottom) - (A11_s2, left) + A20_{s1,s2}(o) - A20_{s2,s1}(o),
// with dP = s1 bottom + left - bottom - s2 left and o the start of both edges.
Angle free_action_gamma2_torus(const MPSFamily& fam, const EquivariantData& eq, int s1, int s2,
                               const Chain& plaquette, const Chain& bottom, const Chain& left);

// Vertex phases, Lambda-commuting unitaries, edge phases and (g, vertex) phases.
struct GaugeTransform {
  std::vector<double> theta;
  std::vector<CMat> W;
  std::vector<double> chi01;
  std::vector<double> chi10;  // [g * num_vertices + vertex]
};

GaugeTransform random_gauge(const MPSFamily& fam, int group_order, std::mt19937_64& rng);
MPSFamily gauge_family(const MPSFamily& fam, const GaugeTransform& gt);
EquivariantData gauge_equivariant(const MPSFamily& gauged, const EquivariantData& eq, const GaugeTransform& gt,
                                  const Tolerances& tol = {});

}  // namespace hberry::equivariant
