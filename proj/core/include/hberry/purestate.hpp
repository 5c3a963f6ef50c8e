#pragma once

#include <memory>
#include <vector>

#include "hberry/gcomplex.hpp"
#include "hberry/mps.hpp"

namespace hberry::purestate {

// One unit vector per vertex; the group action, if any, is carried by the complex.
struct PureStateFamily {
  std::shared_ptr<const gcomplex::GComplex> complex;
  std::vector<CVec> states;
  int dim() const { return states.empty() ? 0 : static_cast<int>(states[0].size()); }
};

PureStateFamily make_family(std::shared_ptr<const gcomplex::GComplex> complex, std::vector<CVec> states);

// arg <psi(t0)|psi(t1)> per stored edge; VanishingOverlap below overlap_tol.
gcomplex::Cochain berry_connection(const PureStateFamily& fam, double overlap_tol = 1e-8);
numerics::Angle berry_phase(const gcomplex::GComplex& c, const gcomplex::Cochain& A, const gcomplex::Chain& loop);
// branch_lift(dA) per triangle, real valued.
gcomplex::Cochain berry_flux(const gcomplex::GComplex& c, const gcomplex::Cochain& A);
mps::QuantizedResult chern(const PureStateFamily& fam, const gcomplex::Chain& surface, const mps::Tolerances& tol = {});

// alpha_g(t) = arg <psi(g t)| g |psi(t)>, bidegree (1, 0).
gcomplex::Cochain alpha_cochain(const PureStateFamily& fam, double equiv_tol = 1e-8);

// Largest |delta A - d alpha| mod 2pi over (g, edge).
double descendant_residual(const PureStateFamily& fam);

using mps::FixedPointValue;

// Berry phase on C - hC from alpha_h at the endpoints of C.
FixedPointValue berry_phase_fixed_point(const PureStateFamily& fam, int h, const gcomplex::Chain& C,
                                        const mps::Tolerances& tol = {});

// alpha_{c_n}(Q) - alpha_{c_n}(P) for dD = C - c_n C, dC = Q - P; direct is 2 pi chern / n.
FixedPointValue chern_mod_n(const PureStateFamily& fam, int cn, int n, const gcomplex::Chain& D, const gcomplex::Chain& C,
                            const mps::Tolerances& tol = {});

// Z2 invariant for a free antipodal sigma with phi = 1: dD = C + sigma C, dC = sigma P - P.
numerics::Angle xi_s2(const PureStateFamily& fam, int sigma, const gcomplex::Chain& D, const gcomplex::Chain& C,
                      int P, const mps::Tolerances& tol = {});

// Lowest eigenvector of h . S, phase canonicalized.
CVec spin_field_ground_state(const RVec& h, int two_s);
// c2 = exp(-i pi Sz), c4 = exp(-i pi/2 Sz), T = exp(i pi Sy) K, acting on R^3.
std::shared_ptr<const GroupData> spin_field_group(const std::vector<std::string>& names, int two_s);
PureStateFamily spin_field_family(std::shared_ptr<const gcomplex::GComplex> complex, int two_s);

// |n> = (n_x + i n_y, n_z), ground state of 1 - 2|n><n|; sigma = antipodal map with rep sign * 1.
std::shared_ptr<const GroupData> two_level_group(int sign);
PureStateFamily two_level_family(std::shared_ptr<const gcomplex::GComplex> complex);

}  // namespace hberry::purestate
