#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "hberry/gcomplex.hpp"
#include "hberry/group.hpp"
#include "hberry/mps.hpp"

namespace hberry::models {

struct SpinOps {
  CMat x, y, z;
};

// Basis m = S, S-1, ..., -S.
SpinOps spin_ops(int two_s);

enum class Bond { Intra, Inter };

// Intra: pair (L_j, R_j) in L (x) R order, n0 <= 0. Inter: pair (R_j, L_j+1) in R (x) L order, n0 >= 0.
CMat pair_hamiltonian(const RVec& n, int two_s, Bond bond);

// Nondegenerate ground state of a Hermitian matrix, phase canonicalized.
CVec pair_ground_state(const CMat& h, double gap_tol = 1e-10);

// Site index i = iL * (2S+1) + iR. D = 1 for n0 <= 0, Schmidt rank of the inter pair otherwise.
mps::MPSTensor ground_mps(const RVec& n, int two_s, double trunc_tol = 1e-12);

// Supported names: T, C2x, C2y, C2z, C2zT, Q4z.
GroupElementSpec group_rep(const std::string& name, int two_s);

std::shared_ptr<const GroupData> model_group(const std::vector<std::string>& names, int two_s);

// ground_mps at every vertex of an S3 mesh, built in parallel.
mps::MPSFamily model_family(std::shared_ptr<const gcomplex::GComplex> complex, int two_s, const mps::Tolerances& tol = {});

}  // namespace hberry::models
