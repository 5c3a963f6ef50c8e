#include "hberry/purestate.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "hberry/models.hpp"

namespace hberry::purestate {

using gcomplex::Chain;
using gcomplex::Cochain;
using gcomplex::Coeff;
using gcomplex::GComplex;
using numerics::Angle;

PureStateFamily make_family(std::shared_ptr<const GComplex> complex, std::vector<CVec> states) {
  if (states.size() != complex->num_vertices()) throw Error(ErrorCode::MeshMismatch, "one state per vertex");
  for (std::size_t v = 0; v < states.size(); ++v) {
    if (states[v].size() != states[0].size()) throw Error(ErrorCode::DimensionMismatch, "state dimensions differ");
    if (!numerics::all_finite(states[v])) throw Error(ErrorCode::NonFinite, "state at vertex " + std::to_string(v));
    if (std::abs(states[v].norm() - 1.0) > 1e-10) throw Error(ErrorCode::VanishingNorm, "state not normalized at vertex " + std::to_string(v));
  }
  if (complex->has_action() && complex->group().hilbert_dim() != states[0].size()) {
    throw Error(ErrorCode::DimensionMismatch, "group representation dimension");
  }
  return {std::move(complex), std::move(states)};
}

Cochain berry_connection(const PureStateFamily& fam, double overlap_tol) {
  const auto& c = *fam.complex;
  Cochain A(0, 1, 1, c.count(1), Coeff::Angle);
  for (std::size_t e = 0; e < c.count(1); ++e) {
    const auto& s = c.simplex(1, e);
    const cd ov = fam.states[static_cast<std::size_t>(s[0])].dot(fam.states[static_cast<std::size_t>(s[1])]);
    if (std::abs(ov) < overlap_tol) {
      throw Error(ErrorCode::VanishingOverlap, "edge (" + std::to_string(s[0]) + "," + std::to_string(s[1]) + ")");
    }
    A.at(0, e) = std::arg(ov);
  }
  return A;
}

Angle berry_phase(const GComplex& c, const Cochain& A, const Chain& loop) {
  if (loop.q() != 1) throw Error(ErrorCode::DimensionMismatch, "loop must be a 1-chain");
  if (!boundary(c, loop).empty()) throw Error(ErrorCode::NotACycle, "loop has boundary");
  return gcomplex::pair_angle(A, 0, loop);
}

Cochain berry_flux(const GComplex& c, const Cochain& A) {
  const Cochain dA = d(c, A);
  Cochain F(0, 2, 1, dA.nsimp(), Coeff::Real);
  for (std::size_t t = 0; t < dA.nsimp(); ++t) F.at(0, t) = numerics::branch_lift(dA.at(0, t));
  return F;
}

mps::QuantizedResult chern(const PureStateFamily& fam, const Chain& surface, const mps::Tolerances& tol) {
  const auto& c = *fam.complex;
  if (surface.q() != 2) throw Error(ErrorCode::DimensionMismatch, "surface must be a 2-chain");
  if (!boundary(c, surface).empty()) throw Error(ErrorCode::NotACycle, "surface has boundary");
  const Cochain F = berry_flux(c, berry_connection(fam, tol.overlap_tol));
  mps::QuantizedResult r;
  double sum = 0.0;
  for (const auto& [i, co] : surface.terms()) {
    const double f = F.at(0, static_cast<std::size_t>(i));
    r.max_abs_flux = std::max(r.max_abs_flux, std::abs(f));
    if (std::abs(f) >= tol.flux_guard) throw Error(ErrorCode::FluxGuardExceeded, "triangle " + std::to_string(i));
    sum += static_cast<double>(co) * f;
  }
  r.raw = sum / kTwoPi;
  r.value = std::llround(r.raw);
  r.residual = std::abs(r.raw - static_cast<double>(r.value));
  return r;
}

Cochain alpha_cochain(const PureStateFamily& fam, double equiv_tol) {
  const auto& c = *fam.complex;
  if (!c.has_action()) throw Error(ErrorCode::PreconditionViolated, "complex has no group action");
  const auto& grp = c.group();
  Cochain a(1, 0, grp.order(), c.num_vertices(), Coeff::Angle);
  for (int g = 0; g < grp.order(); ++g) {
    for (std::size_t v = 0; v < c.num_vertices(); ++v) {
      const CVec gv = apply_rep(grp, g, fam.states[v]);
      const int w = c.act_vertex(g, static_cast<int>(v));
      const cd ov = fam.states[static_cast<std::size_t>(w)].dot(gv);
      if (std::abs(ov) < 1.0 - equiv_tol) {
        throw Error(ErrorCode::EquivarianceViolated, grp.name(g) + " at vertex " + std::to_string(v));
      }
      a.at(static_cast<std::size_t>(g), v) = std::arg(ov);
    }
  }
  return a;
}

double descendant_residual(const PureStateFamily& fam) {
  const auto& c = *fam.complex;
  const Cochain A = berry_connection(fam);
  const Cochain r = delta(c, A) - d(c, alpha_cochain(fam));
  return r.max_abs();
}

namespace {

std::pair<int, int> endpoints(const GComplex& c, const Chain& C) {
  const Chain b = boundary(c, C);
  int P = -1, Q = -1;
  for (const auto& [v, co] : b.terms()) {
    if (co == -1 && P < 0) {
      P = v;
    } else if (co == 1 && Q < 0) {
      Q = v;
    } else {
      throw Error(ErrorCode::BadDecomposition, "arc boundary is not Q - P");
    }
  }
  if (P < 0 || Q < 0) throw Error(ErrorCode::BadDecomposition, "arc boundary is not Q - P");
  return {P, Q};
}

}  // namespace

FixedPointValue berry_phase_fixed_point(const PureStateFamily& fam, int h, const Chain& C, const mps::Tolerances& tol) {
  const auto& c = *fam.complex;
  if (c.group().phi(h) != 1) throw Error(ErrorCode::PreconditionViolated, "element must be unitary");
  auto [P, Q] = endpoints(c, C);
  if (!c.fixes_vertex(h, P) || !c.fixes_vertex(h, Q)) throw Error(ErrorCode::NotFixedPoint, "arc endpoints");
  const Cochain alpha = alpha_cochain(fam, tol.overlap_tol);
  FixedPointValue r;
  r.value = Angle(alpha.at(static_cast<std::size_t>(h), static_cast<std::size_t>(Q)) -
                  alpha.at(static_cast<std::size_t>(h), static_cast<std::size_t>(P)));
  r.direct = berry_phase(c, berry_connection(fam, tol.overlap_tol), C - act(c, h, C));
  r.mismatch = numerics::angle_distance(r.value.value(), r.direct.value());
  return r;
}

FixedPointValue chern_mod_n(const PureStateFamily& fam, int cn, int n, const Chain& D, const Chain& C,
                            const mps::Tolerances& tol) {
  const auto& c = *fam.complex;
  if (c.group().phi(cn) != 1) throw Error(ErrorCode::PreconditionViolated, "element must be unitary");
  if (!(boundary(c, D) == C - act(c, cn, C))) throw Error(ErrorCode::BadDecomposition, "dD != C - c_n C");
  auto [P, Q] = endpoints(c, C);
  if (!c.fixes_vertex(cn, P) || !c.fixes_vertex(cn, Q)) throw Error(ErrorCode::NotFixedPoint, "arc endpoints");
  const Cochain alpha = alpha_cochain(fam, tol.overlap_tol);
  FixedPointValue r;
  r.value = Angle(alpha.at(static_cast<std::size_t>(cn), static_cast<std::size_t>(Q)) -
                  alpha.at(static_cast<std::size_t>(cn), static_cast<std::size_t>(P)));
  const auto nu = chern(fam, c.fundamental_class(), tol);
  r.direct = Angle(kTwoPi * static_cast<double>(nu.value) / n);
  r.mismatch = numerics::angle_distance(r.value.value(), r.direct.value());
  if (r.mismatch > tol.quantization_tol) {
    throw Error(ErrorCode::NotQuantized, "charge difference disagrees with exp(2 pi i nu / n)");
  }
  return r;
}

Angle xi_s2(const PureStateFamily& fam, int sigma, const Chain& D, const Chain& C, int P, const mps::Tolerances& tol) {
  const auto& c = *fam.complex;
  const auto& grp = c.group();
  if (grp.phi(sigma) != 1) throw Error(ErrorCode::PreconditionViolated, "sigma must be unitary");
  if (grp.mul(sigma, sigma) != GroupData::identity()) throw Error(ErrorCode::PreconditionViolated, "sigma^2 != e");
  for (std::size_t v = 0; v < c.num_vertices(); ++v)
    if (c.fixes_vertex(sigma, static_cast<int>(v))) throw Error(ErrorCode::NotFree, "vertex " + std::to_string(v));
  if (!(boundary(c, D) == C + act(c, sigma, C))) throw Error(ErrorCode::BadDecomposition, "dD != C + sigma C");
  if (!(boundary(c, C) == act(c, sigma, gcomplex::vertex_chain(P)) - gcomplex::vertex_chain(P))) {
    throw Error(ErrorCode::BadDecomposition, "dC != sigma P - P");
  }
  const Cochain A = berry_connection(fam, tol.overlap_tol);
  const Cochain F = berry_flux(c, A);
  const Cochain alpha = alpha_cochain(fam, tol.overlap_tol);
  const double xi = 0.5 * gcomplex::pair(F, 0, D) - gcomplex::pair(A, 0, C) +
                    alpha.at(static_cast<std::size_t>(sigma), static_cast<std::size_t>(P));
  const Angle out(xi);
  const double dist = std::min(numerics::angle_distance(out.value(), 0.0), numerics::angle_distance(out.value(), kPi));
  if (dist > tol.quantization_tol) throw Error(ErrorCode::NotQuantized, "xi = " + std::to_string(out.value()));
  return out;
}

CVec spin_field_ground_state(const RVec& h, int two_s) {
  if (h.size() != 3) throw Error(ErrorCode::DimensionMismatch, "field must be a 3-vector");
  const auto s = models::spin_ops(two_s);
  const CMat H = h(0) * s.x + h(1) * s.y + h(2) * s.z;
  return models::pair_ground_state(H);
}

std::shared_ptr<const GroupData> spin_field_group(const std::vector<std::string>& names, int two_s) {
  const auto s = models::spin_ops(two_s);
  std::vector<GroupElementSpec> gens;
  for (const auto& name : names) {
    GroupElementSpec g;
    g.name = name;
    if (name == "c2" || name == "c4") {
      const int n = name == "c2" ? 2 : 4;
      const double a = kTwoPi / n;
      g.u = numerics::expi_hermitian(s.z, -a);
      g.param = RMat::Identity(3, 3);
      g.param(0, 0) = g.param(1, 1) = std::round(std::cos(a));
      g.param(0, 1) = -std::round(std::sin(a));
      g.param(1, 0) = std::round(std::sin(a));
    } else if (name == "T") {
      g.u = numerics::expi_hermitian(s.y, kPi);
      g.phi = -1;
      g.param = -RMat::Identity(3, 3);
    } else {
      throw Error(ErrorCode::UnknownName, "spin field symmetry " + name);
    }
    gens.push_back(g);
  }
  if (gens.empty()) return std::make_shared<const GroupData>(GroupData::trivial(3, two_s + 1));
  return std::make_shared<const GroupData>(GroupData::generate(gens));
}

PureStateFamily spin_field_family(std::shared_ptr<const GComplex> complex, int two_s) {
  if (complex->ambient() != 3) throw Error(ErrorCode::DimensionMismatch, "spin field family lives on S2");
  std::vector<CVec> states(complex->num_vertices());
  for (std::size_t v = 0; v < states.size(); ++v) states[v] = spin_field_ground_state(complex->coord(static_cast<int>(v)), two_s);
  return make_family(std::move(complex), std::move(states));
}

std::shared_ptr<const GroupData> two_level_group(int sign) {
  GroupElementSpec g{"sigma", -RMat::Identity(3, 3), static_cast<double>(sign) * CMat::Identity(2, 2), 1};
  return std::make_shared<const GroupData>(GroupData::generate({g}));
}

PureStateFamily two_level_family(std::shared_ptr<const GComplex> complex) {
  if (complex->ambient() != 3) throw Error(ErrorCode::DimensionMismatch, "two-level family lives on S2");
  std::vector<CVec> states(complex->num_vertices());
  for (std::size_t v = 0; v < states.size(); ++v) {
    const RVec& n = complex->coord(static_cast<int>(v));
    CVec k(2);
    k << cd(n(0), n(1)), cd(n(2), 0.0);
    const CMat H = CMat::Identity(2, 2) - 2.0 * k * k.adjoint();
    states[v] = models::pair_ground_state(H);
  }
  return make_family(std::move(complex), std::move(states));
}

}  // namespace hberry::purestate
