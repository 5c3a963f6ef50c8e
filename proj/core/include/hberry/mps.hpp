#pragma once

#include <memory>
#include <vector>

#include "hberry/gcomplex.hpp"
#include "hberry/numerics.hpp"

namespace hberry::mps {

struct Tolerances {
  double trunc_tol = 1e-12;
  double canon_tol = 1e-10;
  double eig_tol = 1e-10;
  double gap_tol = 1e-6;
  double overlap_tol = 1e-8;
  double wilson_tol = 1e-10;
  double flux_guard = kPi / 2;
  double quantization_tol = 1e-3;
  double equiv_tol = 1e-6;
  double prop_tol = 1e-6;
  double coc_tol = 1e-8;
};

// Right-canonical site tensor: sum_i A^i A^i+ = 1, sum_i A^i+ L^2 A^i = L^2, L = diag(lambda).
struct MPSTensor {
  std::vector<CMat> A;
  RVec lambda;
  int n() const { return static_cast<int>(A.size()); }
  int D() const { return static_cast<int>(lambda.size()); }
};

// NotInjective when the transfer matrix has a degenerate dominant eigenvalue.
MPSTensor right_canonicalize(const std::vector<CMat>& raw, double trunc_tol = 1e-12, double gap_tol = 1e-6);

// max of the two canonical identities and |Tr L^2 - 1|
double canonical_residual(const MPSTensor& t);

struct InjectivityReport {
  cd mu;
  double gap_ratio;
  double canonical_residual;
};

InjectivityReport injectivity_check(const MPSTensor& t, double gap_tol = 1e-6, double canon_tol = 1e-10);

// Matrix of X -> sum_i A^i X B^i+ on row-major vec(X).
CMat mixed_transfer(const MPSTensor& a, const MPSTensor& b);

struct EdgeOverlap {
  cd mu;
  CMat X;  // D0 x D1, Frobenius norm 1
  double gap_ratio = 0.0;
  double A01() const { return std::arg(mu); }
  EdgeOverlap reversed() const { return {std::conj(mu), X.adjoint(), gap_ratio}; }
};

EdgeOverlap edge_overlap(const MPSTensor& t0, const MPSTensor& t1, double gap_tol = 1e-6);

// A^i -> e^{i theta} W+ A^i W, with W unitary commuting with Lambda.
MPSTensor apply_gauge(const MPSTensor& t, double theta, const CMat& W);

// Vertex tensors plus per-edge overlaps (stored orientation) and the connections A01, A02.
struct MPSFamily {
  std::shared_ptr<const gcomplex::GComplex> complex;
  std::vector<MPSTensor> tensors;
  std::vector<EdgeOverlap> edges;
  gcomplex::Cochain A01;
  gcomplex::Cochain A02;

  const gcomplex::GComplex& mesh() const { return *complex; }
  // Oriented overlap from vertex a to vertex b.
  CMat X(int a, int b) const;
  cd mu(int a, int b) const;
  double min_gap() const;
};

MPSFamily build_family(std::shared_ptr<const gcomplex::GComplex> complex, std::vector<MPSTensor> tensors,
                       const Tolerances& tol = {});

// Recomputes A01 from the stored mu and A02 from the stored X.
void compute_connections(MPSFamily& fam, const Tolerances& tol = {});

double higher_connection(const MPSFamily& fam, std::size_t tri, double wilson_tol = 1e-10);

// branch_lift(dA01), branch_lift(dA02)
gcomplex::Cochain flux2(const MPSFamily& fam);
gcomplex::Cochain flux3(const MPSFamily& fam);

struct QuantizedResult {
  long long value = 0;
  double raw = 0.0;  // sum of lifted flux / 2pi
  double residual = 0.0;
  double max_abs_flux = 0.0;
};

// A fixed-point or mod-n formula next to the quantity it reproduces.
struct FixedPointValue {
  numerics::Angle value;
  numerics::Angle direct;
  double mismatch = 0.0;
};

QuantizedResult ddks(const MPSFamily& fam, const gcomplex::Chain& volume, const Tolerances& tol = {});
QuantizedResult chern_from_A01(const MPSFamily& fam, const gcomplex::Chain& surface, const Tolerances& tol = {});

// Phase of <l|g|l> over the N-site reference <t1|g|t1>, l the soliton state along the closed vertex loop.
double soliton_charge(const MPSFamily& fam, const std::vector<int>& loop, int g);

}  // namespace hberry::mps
