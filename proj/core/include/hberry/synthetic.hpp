#pragma once

#include <cstdint>
#include <memory>

#include "hberry/gcomplex.hpp"
#include "hberry/mps.hpp"

namespace hberry::synthetic {

// Antipodal sigma on S3 acting by the model's time reversal: param -1, phi = -1.
std::shared_ptr<const GroupData> antipodal_group(int two_s);

// Model ground states at m(n) = normalize(n0^2 - 1/2, n1, n2, n3), so m(-n) = T m(n).
// The two hemispheres n0 > 0 and n0 < 0 carry DDKS monopoles of opposite sign.
mps::MPSFamily glued_family(int refinements, int two_s, const mps::Tolerances& tol = {});

// Random smooth D = 2 family on an n x n torus grid with a free half-period shift s1 in the
// second angle; u = diag(1, -1). strip is the band j in [0, n/2), base its lower edge with
// d strip = s1 base - base.
struct CylinderFamily {
  mps::MPSFamily fam;
  int s1 = 1;
  gcomplex::Chain strip, base;
};
CylinderFamily cylinder_family(int n, std::uint64_t seed, const mps::Tolerances& tol = {});

// As above with half-period shifts s1 (second angle) and s2 (first angle); plaquette is the
// block [0, n/2)^2, clockwise, with d plaquette = s1 bottom + left - bottom - s2 left.
struct TorusFamily {
  mps::MPSFamily fam;
  int s1 = 1, s2 = 2;
  gcomplex::Chain plaquette, bottom, left;
};
TorusFamily torus_family(int n, std::uint64_t seed, const mps::Tolerances& tol = {});

}  // namespace hberry::synthetic
