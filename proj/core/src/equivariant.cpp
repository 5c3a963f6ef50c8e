#include "hberry/equivariant.hpp"

#include <cmath>

namespace hberry::equivariant {

using gcomplex::Coeff;
using gcomplex::GComplex;
using numerics::angle_distance;

namespace {

void require(bool ok, ErrorCode code, const std::string& what) {
  if (!ok) throw Error(code, what);
}

double dist_to_z2(double a) { return std::min(angle_distance(a, 0.0), angle_distance(a, kPi)); }

Angle quantized_z2(double a, double tol, const std::string& what) {
  const Angle r(a);
  if (dist_to_z2(r.value()) > tol) throw Error(ErrorCode::NotQuantized, what + " = " + std::to_string(r.value()));
  return r;
}

std::size_t tup(const Cochain& f, std::initializer_list<int> gs) { return f.tuple(std::vector<int>(gs)); }

double a20(const EquivariantData& eq, int g, int h, int v) {
  return eq.A20.at(tup(eq.A20, {g, h}), static_cast<std::size_t>(v));
}

// (f_g, chain) for a (1, q) cochain.
double pair_g(const Cochain& f, int g, const Chain& ch) { return gcomplex::pair(f, static_cast<std::size_t>(g), ch); }

// Start and end of an open 1-chain with dC = Q - P.
std::pair<int, int> endpoints(const GComplex& c, const Chain& C) {
  int P = -1, Q = -1;
  const Chain bd = boundary(c, C);
  for (const auto& [v, co] : bd.terms()) {
    if (co == -1 && P < 0) {
      P = v;
    } else if (co == 1 && Q < 0) {
      Q = v;
    } else {
      throw Error(ErrorCode::BadDecomposition, "arc boundary is not Q - P");
    }
  }
  require(P >= 0 && Q >= 0, ErrorCode::BadDecomposition, "arc boundary is not Q - P");
  return {P, Q};
}

double flux_total(const MPSFamily& fam, const Chain& ch) { return gcomplex::pair(mps::flux3(fam), 0, ch); }

long long ddks_value(const MPSFamily& fam, const Tolerances& tol) {
  const auto r = mps::ddks(fam, fam.mesh().fundamental_class(), tol);
  if (r.residual > tol.quantization_tol) throw Error(ErrorCode::NotQuantized, "DDKS residual");
  return r.value;
}

FixedPointValue compare(double value, double direct, double tol, const std::string& what) {
  FixedPointValue r{Angle(value), Angle(direct), 0.0};
  r.mismatch = angle_distance(r.value.value(), r.direct.value());
  if (r.mismatch > tol) {
    throw Error(ErrorCode::NotQuantized, what + ": " + std::to_string(r.value.value()) + " vs " + std::to_string(r.direct.value()));
  }
  return r;
}

const Chain& domain(const NamedChains& d, const std::string& name) {
  auto it = d.find(name);
  if (it == d.end()) throw Error(ErrorCode::BadDecomposition, "missing domain " + name);
  return it->second;
}

int single_vertex(const Chain& p) {
  require(p.q() == 0 && p.size() == 1 && p.terms().begin()->second == 1, ErrorCode::BadDecomposition, "point chain");
  return p.terms().begin()->first;
}

void require_fixed(const GComplex& c, int g, int v) {
  require(c.fixes_vertex(g, v), ErrorCode::NotFixedPoint, c.group().name(g) + " does not fix vertex " + std::to_string(v));
}

}  // namespace

mps::MPSTensor transform_mps(const GroupData& group, int g, const mps::MPSTensor& t) {
  const CMat& u = group.u(g);
  require(u.rows() == t.n(), ErrorCode::DimensionMismatch, "representation dimension");
  mps::MPSTensor out;
  out.lambda = t.lambda;
  const bool conj = group.phi(g) == -1;
  for (int i = 0; i < t.n(); ++i) {
    CMat m = CMat::Zero(t.D(), t.D());
    for (int j = 0; j < t.n(); ++j) {
      const cd c = u(i, j);
      if (c == cd(0.0)) continue;
      m += c * (conj ? CMat(t.A[static_cast<std::size_t>(j)].conjugate()) : t.A[static_cast<std::size_t>(j)]);
    }
    out.A.push_back(m);
  }
  return out;
}

EquivariantData build_equivariant(const MPSFamily& fam, const Tolerances& tol) {
  const auto& c = fam.mesh();
  require(c.has_action(), ErrorCode::PreconditionViolated, "complex has no group action");
  const auto& grp = c.group();
  const int G = grp.order();
  const std::size_t nv = c.num_vertices();
  std::vector<CMat> V(static_cast<std::size_t>(G) * nv);
  Cochain A10(1, 0, G, nv, Coeff::Angle);
  std::vector<double> defect(V.size(), 0.0), modulus(V.size(), 1.0);
  numerics::parallel_for(V.size(), [&](std::size_t k) {
    const int g = static_cast<int>(k / nv);
    const int v = static_cast<int>(k % nv);
    const int gv = c.act_vertex(g, v);
    const auto& t = fam.tensors[static_cast<std::size_t>(v)];
    const auto& tg = fam.tensors[static_cast<std::size_t>(gv)];
    if (t.D() != tg.D() || (t.lambda - tg.lambda).cwiseAbs().maxCoeff() > 1e-8) {
      throw Error(ErrorCode::SchmidtMismatch, grp.name(g) + " at vertex " + std::to_string(v));
    }
    mps::EdgeOverlap ov;
    try {
      ov = mps::edge_overlap(transform_mps(grp, g, t), tg, tol.gap_tol);
    } catch (const Error& e) {
      throw Error(ErrorCode::EquivarianceViolated, grp.name(g) + " at vertex " + std::to_string(v) + ": " + e.detail());
    }
    modulus[k] = std::abs(ov.mu);
    if (modulus[k] < 1.0 - tol.equiv_tol) {
      throw Error(ErrorCode::EquivarianceViolated,
                  grp.name(g) + " at vertex " + std::to_string(v) + ", |mu| = " + std::to_string(modulus[k]));
    }
    const CMat scaled = ov.X * std::sqrt(static_cast<double>(t.D()));
    const CMat W = numerics::polar_unitary(scaled);
    defect[k] = (scaled - W * (W.adjoint() * scaled).trace() / static_cast<double>(t.D())).norm();
    V[k] = W.adjoint();
    A10.at(static_cast<std::size_t>(g), static_cast<std::size_t>(v)) = -std::arg(ov.mu);
  });
  // V_e = 1 and A10_e = 0 exactly.
  for (std::size_t v = 0; v < nv; ++v) {
    V[v] = CMat::Identity(fam.tensors[v].D(), fam.tensors[v].D());
    A10.at(0, v) = 0.0;
  }
  auto eq = complete_equivariant(fam, std::move(V), std::move(A10), tol);
  for (std::size_t k = 0; k < defect.size(); ++k) {
    eq.max_unitarity_defect = std::max(eq.max_unitarity_defect, defect[k]);
    eq.min_transfer_modulus = std::min(eq.min_transfer_modulus, modulus[k]);
  }
  return eq;
}

EquivariantData complete_equivariant(const MPSFamily& fam, std::vector<CMat> V, Cochain A10, const Tolerances& tol) {
  const auto& c = fam.mesh();
  const auto& grp = c.group();
  const int G = grp.order();
  const std::size_t nv = c.num_vertices();
  require(V.size() == static_cast<std::size_t>(G) * nv, ErrorCode::DimensionMismatch, "one V per (g, vertex)");
  EquivariantData eq;
  eq.group_order = G;
  eq.num_vertices = nv;
  eq.V = std::move(V);
  eq.A10 = std::move(A10);
  for (std::size_t k = 0; k < eq.V.size(); ++k) {
    const auto& lam = fam.tensors[k % nv].lambda;
    const CMat L = lam.cast<cd>().asDiagonal();
    if ((eq.V[k] * L - L * eq.V[k]).norm() > 1e-8) {
      throw Error(ErrorCode::EquivarianceViolated, "V does not commute with Lambda at vertex " + std::to_string(k % nv));
    }
  }

  const std::size_t ne = c.count(1);
  eq.A11 = Cochain(1, 1, G, ne, Coeff::Angle);
  numerics::parallel_for(static_cast<std::size_t>(G) * ne, [&](std::size_t k) {
    const int g = static_cast<int>(k / ne);
    const std::size_t e = k % ne;
    if (g == GroupData::identity()) return;
    const auto& s = c.simplex(1, e);
    const CMat& X = fam.edges[e].X;
    const CMat Xphi = grp.phi(g) == 1 ? X : CMat(X.conjugate());
    const CMat Xg = fam.X(c.act_vertex(g, s[0]), c.act_vertex(g, s[1]));
    const cd tr = (Xg.adjoint() * eq.v(g, s[0]) * Xphi * eq.v(g, s[1]).adjoint()).trace();
    if (std::abs(tr) < 1.0 - 1e3 * tol.equiv_tol) {
      throw Error(ErrorCode::EquivarianceViolated, grp.name(g) + " on edge " + std::to_string(e));
    }
    eq.A11.at(static_cast<std::size_t>(g), e) = std::arg(tr);
  });

  eq.A20 = Cochain(2, 0, G, nv, Coeff::Angle);
  const std::size_t GG = static_cast<std::size_t>(G) * static_cast<std::size_t>(G);
  std::vector<double> prop(GG * nv, 0.0);
  numerics::parallel_for(GG * nv, [&](std::size_t k) {
    const int g = static_cast<int>(k / (static_cast<std::size_t>(G) * nv));
    const int h = static_cast<int>((k / nv) % static_cast<std::size_t>(G));
    const int v = static_cast<int>(k % nv);
    if (g == GroupData::identity() || h == GroupData::identity()) return;
    const CMat& Vh = eq.v(h, v);
    const CMat M = eq.v(g, c.act_vertex(h, v)) * (grp.phi(g) == 1 ? Vh : CMat(Vh.conjugate())) *
                   eq.v(grp.mul(g, h), v).adjoint();
    const double D = static_cast<double>(M.rows());
    const cd tr = M.trace() / D;
    const double dev = (M - tr * CMat::Identity(M.rows(), M.cols())).norm();
    if (dev > tol.prop_tol) {
      throw Error(ErrorCode::NotProportionalToIdentity, "(" + grp.name(g) + ", " + grp.name(h) + ") at vertex " +
                                                            std::to_string(v) + ", deviation " + std::to_string(dev));
    }
    eq.A20.at(k / nv, static_cast<std::size_t>(v)) = std::arg(tr);
  });
  return eq;
}

double CocycleResiduals::max() const {
  return std::max({delta_A10, delta_A01_d_A10, delta_A02_d_A11, delta_A11_d_A20, delta_A20});
}

CocycleResiduals cocycle_residuals(const MPSFamily& fam, const EquivariantData& eq) {
  const auto& c = fam.mesh();
  CocycleResiduals r;
  r.delta_A10 = delta(c, eq.A10).max_abs();
  r.delta_A01_d_A10 = (delta(c, fam.A01) - d(c, eq.A10)).max_abs();
  r.delta_A02_d_A11 = (delta(c, fam.A02) - d(c, eq.A11)).max_abs();
  r.delta_A11_d_A20 = (delta(c, eq.A11) + d(c, eq.A20)).max_abs();
  r.delta_A20 = delta(c, eq.A20).max_abs();
  return r;
}

Angle mu_T(const MPSFamily& fam, const EquivariantData& eq, int g, int h, int tau, const Tolerances& tol) {
  const auto& c = fam.mesh();
  const auto& grp = c.group();
  require(grp.phi(g) == 1 && grp.phi(h) == 1, ErrorCode::PreconditionViolated, "mu_T needs unitary elements");
  require(grp.mul(g, h) == grp.mul(h, g), ErrorCode::PreconditionViolated, "mu_T needs commuting elements");
  require_fixed(c, g, tau);
  require_fixed(c, h, tau);
  return quantized_z2(a20(eq, g, h, tau) - a20(eq, h, g, tau), tol.quantization_tol, "mu_T");
}

Angle mu_RP(const MPSFamily& fam, const EquivariantData& eq, int a, int tau, const Tolerances& tol) {
  const auto& c = fam.mesh();
  const auto& grp = c.group();
  require(grp.phi(a) == -1, ErrorCode::PreconditionViolated, "mu_RP needs an antiunitary element");
  require(grp.mul(a, a) == GroupData::identity(), ErrorCode::PreconditionViolated, "mu_RP needs a^2 = e");
  require_fixed(c, a, tau);
  return quantized_z2(a20(eq, a, a, tau), tol.quantization_tol, "mu_RP");
}

Angle mu_KB(const MPSFamily& fam, const EquivariantData& eq, int a, int g, int tau, const Tolerances& tol) {
  const auto& c = fam.mesh();
  const auto& grp = c.group();
  const int gi = grp.inv(g);
  require(grp.phi(a) == -1 && grp.phi(g) == 1, ErrorCode::PreconditionViolated, "mu_KB needs phi_a = -1, phi_g = 1");
  require(grp.mul(a, gi) == grp.mul(g, a), ErrorCode::PreconditionViolated, "mu_KB needs a g^-1 = g a");
  require_fixed(c, a, tau);
  require_fixed(c, g, tau);
  return quantized_z2(a20(eq, a, gi, tau) + a20(eq, g, gi, tau) - a20(eq, g, a, tau), tol.quantization_tol, "mu_KB");
}

Angle pump_eta(const MPSFamily& fam, const EquivariantData& eq, int g, const Chain& loop, const Tolerances& tol) {
  const auto& c = fam.mesh();
  require(loop.q() == 1, ErrorCode::DimensionMismatch, "loop must be a 1-chain");
  require(boundary(c, loop).empty(), ErrorCode::NotACycle, "loop has boundary");
  require(c.group().phi(g) == 1, ErrorCode::NotStabilized, "pump needs a unitary element");
  for (const auto& [e, co] : loop.terms()) {
    for (int v : c.simplex(1, static_cast<std::size_t>(e))) {
      if (!c.fixes_vertex(g, v)) throw Error(ErrorCode::NotStabilized, "vertex " + std::to_string(v));
    }
  }
  // Flatness of A11_g on triangles inside the fixed set.
  const Cochain dA = c.dim() >= 2 ? d(c, eq.A11) : Cochain();
  for (std::size_t t = 0; c.dim() >= 2 && t < c.count(2); ++t) {
    const auto& s = c.simplex(2, t);
    bool fixed = true;
    for (int v : s) fixed = fixed && c.fixes_vertex(g, v);
    if (!fixed) continue;
    const double r = angle_distance(Angle(dA.at(static_cast<std::size_t>(g), t)).value(), 0.0);
    if (r > tol.coc_tol) throw Error(ErrorCode::EquivarianceViolated, "dA11 not flat on triangle " + std::to_string(t));
  }
  return Angle(pair_g(eq.A11, g, loop));
}

FixedPointValue pump_fixed_point(const MPSFamily& fam, const EquivariantData& eq, int g, int h, const Chain& C,
                                 const Tolerances& tol) {
  const auto& c = fam.mesh();
  require(c.group().phi(h) == 1, ErrorCode::PreconditionViolated, "h must be unitary");
  auto [P, Q] = endpoints(c, C);
  const double value = mu_T(fam, eq, g, h, Q, tol).value() - mu_T(fam, eq, g, h, P, tol).value();
  const double direct = pump_eta(fam, eq, g, C - act(c, h, C), tol).value();
  return compare(value, direct, tol.quantization_tol, "pump fixed point");
}

Angle gamma2(const MPSFamily& fam, const Chain& surface, int stabilizer, const Tolerances& tol) {
  const auto& c = fam.mesh();
  require(surface.q() == 2, ErrorCode::DimensionMismatch, "surface must be a 2-chain");
  require(boundary(c, surface).empty(), ErrorCode::NotACycle, "surface has boundary");
  const double sum = gcomplex::pair(fam.A02, 0, surface);
  if (stabilizer < 0) return Angle(sum);
  require(c.group().phi(stabilizer) == -1, ErrorCode::PreconditionViolated, "stabilizer must be antiunitary");
  for (const auto& [t, co] : surface.terms())
    for (int v : c.simplex(2, static_cast<std::size_t>(t))) require_fixed(c, stabilizer, v);
  return quantized_z2(sum, tol.quantization_tol, "gamma2");
}

FixedPointValue gamma2_fixed_point(const MPSFamily& fam, const EquivariantData& eq, int b, const Chain& D,
                                   const Chain& C, const Tolerances& tol) {
  const auto& c = fam.mesh();
  const auto& grp = c.group();
  require(grp.phi(b) == -1 && grp.mul(b, b) == GroupData::identity(), ErrorCode::PreconditionViolated,
          "b must be an antiunitary involution");
  require(boundary(c, D) == C - act(c, b, C), ErrorCode::BadDecomposition, "dD != C - bC");
  auto [P, Q] = endpoints(c, C);
  const double value = mu_RP(fam, eq, b, P, tol).value() - mu_RP(fam, eq, b, Q, tol).value();
  const double direct = gamma2(fam, D + act(c, b, D)).value();
  return compare(value, direct, tol.quantization_tol, "gamma2 fixed point");
}

FixedPointValue ddks_parity_berry(const MPSFamily& fam, const NamedChains& domains, const Tolerances& tol) {
  const auto& c = fam.mesh();
  const Chain& D3 = domain(domains, "D3");
  const Chain surface = boundary(c, D3);
  const double value = gcomplex::pair(fam.A02, 0, surface);
  return compare(value, kPi * static_cast<double>(ddks_value(fam, tol)), tol.quantization_tol, "DDKS parity (Berry)");
}

FixedPointValue ddks_mod_n_pump(const MPSFamily& fam, const EquivariantData& eq, int cn, int n, const Chain& D3,
                                const Chain& D2, const Tolerances& tol) {
  const auto& c = fam.mesh();
  require(c.group().phi(cn) == 1, ErrorCode::PreconditionViolated, "C_n must be unitary");
  require(boundary(c, D3) == D2 - act(c, cn, D2), ErrorCode::BadDecomposition, "dD3 != D2 - C_n D2");
  const double value = pump_eta(fam, eq, cn, boundary(c, D2), tol).value();
  const double direct = kTwoPi * static_cast<double>(ddks_value(fam, tol)) / n;
  return compare(value, direct, tol.quantization_tol, "DDKS mod n (pump)");
}

FixedPointValue ddks_parity_T(const MPSFamily& fam, const EquivariantData& eq, int T, const NamedChains& domains,
                              const Tolerances& tol) {
  const auto& c = fam.mesh();
  const Chain &D3 = domain(domains, "D3"), &D2 = domain(domains, "D2"), &D1 = domain(domains, "D1");
  const Chain &Pp = domain(domains, "P+"), &Pm = domain(domains, "P-");
  require(boundary(c, D3) == D2 + act(c, T, D2), ErrorCode::BadDecomposition, "dD3 != D2 + T D2");
  require(boundary(c, D2) == D1 - act(c, T, D1), ErrorCode::BadDecomposition, "dD2 != D1 - T D1");
  require(boundary(c, D1) == Pm - Pp, ErrorCode::BadDecomposition, "dD1 != P- - P+");
  const double value = mu_RP(fam, eq, T, single_vertex(Pp), tol).value() - mu_RP(fam, eq, T, single_vertex(Pm), tol).value();
  return compare(value, kPi * static_cast<double>(ddks_value(fam, tol)), tol.quantization_tol, "DDKS parity (T)");
}

FixedPointValue ddks_mod4_z2z2(const MPSFamily& fam, const EquivariantData& eq, int x, int y,
                               const NamedChains& domains, const Tolerances& tol) {
  const auto& c = fam.mesh();
  const auto& grp = c.group();
  require(grp.phi(x) == 1 && grp.phi(y) == 1 && grp.mul(x, y) == grp.mul(y, x), ErrorCode::PreconditionViolated,
          "x, y must be commuting unitaries");
  const Chain& Q = domain(domains, "D3_*++*");
  const Chain &A = domain(domains, "D2_*+0*"), &B = domain(domains, "D2_*0+*");
  const Chain &Ap = domain(domains, "D2_*+0+"), &Bm = domain(domains, "D2_*0+-");
  const Chain &D1x = domain(domains, "D1_*+00"), &D1y = domain(domains, "D1_*0+0"), &D1z = domain(domains, "D1_*00+");
  require(boundary(c, Q) == B - A, ErrorCode::BadDecomposition, "dD3 != -D2_*+0* + D2_*0+*");
  require(A == Ap - act(c, x, Ap), ErrorCode::BadDecomposition, "D2_*+0* != D2_*+0+ - x D2_*+0+");
  require(B == Bm - act(c, y, Bm), ErrorCode::BadDecomposition, "D2_*0+* != D2_*0+- - y D2_*0+-");
  require(boundary(c, Ap) == D1x - D1z, ErrorCode::BadDecomposition, "dD2_*+0+ != D1_*+00 - D1_*00+");
  require(boundary(c, Bm) == act(c, y, D1z) - D1y, ErrorCode::BadDecomposition, "dD2_*0+- != y D1_*00+ - D1_*0+0");
  require(act(c, x, D1z) == act(c, y, D1z), ErrorCode::BadDecomposition, "x and y differ on D1_*00+");
  const int xy = grp.mul(x, y);
  const Chain ends = boundary(c, D1z);
  double value = -pair_g(eq.A11, x, D1x) - pair_g(eq.A11, y, D1y) + pair_g(eq.A11, xy, D1z);
  for (const auto& [v, co] : ends.terms()) value -= static_cast<double>(co) * a20(eq, y, x, v);
  const double direct = 0.5 * kPi * static_cast<double>(ddks_value(fam, tol));
  return compare(value, direct, tol.quantization_tol, "DDKS mod 4 (Z2 x Z2)");
}

FixedPointValue ddks_parity_z2z2(const MPSFamily& fam, const EquivariantData& eq, int x, int y,
                                 const NamedChains& domains, const Tolerances& tol) {
  const int Pp = single_vertex(domain(domains, "P+")), Pm = single_vertex(domain(domains, "P-"));
  const double value = mu_T(fam, eq, x, y, Pp, tol).value() - mu_T(fam, eq, x, y, Pm, tol).value();
  return compare(value, kPi * static_cast<double>(ddks_value(fam, tol)), tol.quantization_tol, "DDKS parity (Z2 x Z2)");
}

Angle xi_s3(const MPSFamily& fam, const EquivariantData& eq, int sigma, const NamedChains& domains,
            const Tolerances& tol) {
  const auto& c = fam.mesh();
  const auto& grp = c.group();
  require(grp.phi(sigma) == -1, ErrorCode::PreconditionViolated, "sigma must be antiunitary");
  require(grp.mul(sigma, sigma) == GroupData::identity(), ErrorCode::PreconditionViolated, "sigma^2 != e");
  for (std::size_t v = 0; v < c.num_vertices(); ++v)
    if (c.fixes_vertex(sigma, static_cast<int>(v))) throw Error(ErrorCode::NotFree, "vertex " + std::to_string(v));
  const Chain &D3 = domain(domains, "D3"), &D2 = domain(domains, "D2"), &D1 = domain(domains, "D1");
  const Chain& Pp = domain(domains, "P+");
  require(boundary(c, D3) == D2 - act(c, sigma, D2), ErrorCode::BadDecomposition, "dD3 != D2 - sigma D2");
  require(boundary(c, D2) == D1 + act(c, sigma, D1), ErrorCode::BadDecomposition, "dD2 != D1 + sigma D1");
  require(boundary(c, D1) == act(c, sigma, Pp) - Pp, ErrorCode::BadDecomposition, "dD1 != sigma P+ - P+");
  const int p = single_vertex(Pp);
  const double xi = 0.5 * flux_total(fam, D3) - gcomplex::pair(fam.A02, 0, D2) - pair_g(eq.A11, sigma, D1) -
                    a20(eq, sigma, sigma, p);
  return quantized_z2(xi, tol.quantization_tol, "xi(S3)");
}

Angle free_action_gamma2_cylinder(const MPSFamily& fam, const EquivariantData& eq, int s1, const Chain& strip,
                                  const Chain& base) {
  const auto& c = fam.mesh();
  require(c.group().phi(s1) == 1, ErrorCode::PreconditionViolated, "shift must be unitary");
  require(boundary(c, strip) == act(c, s1, base) - base, ErrorCode::BadDecomposition, "d strip != s1 base - base");
  return Angle(gcomplex::pair(fam.A02, 0, strip) + pair_g(eq.A11, s1, base));
}

Angle free_action_gamma2_torus(const MPSFamily& fam, const EquivariantData& eq, int s1, int s2,
                               const Chain& plaquette, const Chain& bottom, const Chain& left) {
  const auto& c = fam.mesh();
  const auto& grp = c.group();
  require(grp.phi(s1) == 1 && grp.phi(s2) == 1 && grp.mul(s1, s2) == grp.mul(s2, s1), ErrorCode::PreconditionViolated,
          "shifts must be commuting unitaries");
  require(boundary(c, plaquette) == act(c, s1, bottom) + left - bottom - act(c, s2, left), ErrorCode::BadDecomposition,
          "plaquette boundary");
  const int o = endpoints(c, bottom).first;
  require(endpoints(c, left).first == o, ErrorCode::BadDecomposition, "bottom and left start at different vertices");
  return Angle(gcomplex::pair(fam.A02, 0, plaquette) + pair_g(eq.A11, s1, bottom) - pair_g(eq.A11, s2, left) +
               a20(eq, s1, s2, o) - a20(eq, s2, s1, o));
}

namespace {

CMat random_unitary(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  CMat z(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) z(i, j) = cd(nd(rng), nd(rng));
  Eigen::HouseholderQR<CMat> qr(z);
  CMat q = qr.householderQ();
  CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i) q.col(i) *= r(i, i) / std::abs(r(i, i));
  return q;
}

}  // namespace

GaugeTransform random_gauge(const MPSFamily& fam, int group_order, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ud(0.0, kTwoPi);
  const auto& c = fam.mesh();
  const std::size_t nv = c.num_vertices();
  GaugeTransform gt;
  for (std::size_t v = 0; v < nv; ++v) {
    gt.theta.push_back(ud(rng));
    const auto& lam = fam.tensors[v].lambda;
    const int D = static_cast<int>(lam.size());
    CMat W = CMat::Zero(D, D);
    int start = 0;
    while (start < D) {
      int end = start + 1;
      while (end < D && std::abs(lam(end) - lam(start)) < 1e-10) ++end;
      W.block(start, start, end - start, end - start) = random_unitary(end - start, rng);
      start = end;
    }
    gt.W.push_back(W);
  }
  for (std::size_t e = 0; e < c.count(1); ++e) gt.chi01.push_back(ud(rng));
  for (std::size_t k = 0; k < static_cast<std::size_t>(group_order) * nv; ++k) gt.chi10.push_back(k < nv ? 0.0 : ud(rng));
  return gt;
}

MPSFamily gauge_family(const MPSFamily& fam, const GaugeTransform& gt) {
  const auto& c = fam.mesh();
  MPSFamily out;
  out.complex = fam.complex;
  for (std::size_t v = 0; v < fam.tensors.size(); ++v) {
    out.tensors.push_back(mps::apply_gauge(fam.tensors[v], gt.theta[v], gt.W[v]));
  }
  for (std::size_t e = 0; e < c.count(1); ++e) {
    const auto& s = c.simplex(1, e);
    const auto a = static_cast<std::size_t>(s[0]), b = static_cast<std::size_t>(s[1]);
    mps::EdgeOverlap ov = fam.edges[e];
    ov.X = std::exp(cd(0.0, gt.chi01[e])) * gt.W[a].adjoint() * ov.X * gt.W[b];
    ov.mu *= std::exp(cd(0.0, gt.theta[a] - gt.theta[b]));
    out.edges.push_back(ov);
  }
  mps::compute_connections(out);
  return out;
}

EquivariantData gauge_equivariant(const MPSFamily& gauged, const EquivariantData& eq, const GaugeTransform& gt,
                                  const Tolerances& tol) {
  const auto& c = gauged.mesh();
  const auto& grp = c.group();
  const std::size_t nv = eq.num_vertices;
  std::vector<CMat> V(eq.V.size());
  Cochain A10 = eq.A10;
  for (std::size_t k = 0; k < V.size(); ++k) {
    const int g = static_cast<int>(k / nv);
    const int v = static_cast<int>(k % nv);
    const auto gv = static_cast<std::size_t>(c.act_vertex(g, v));
    const CMat& Wv = gt.W[static_cast<std::size_t>(v)];
    const int phi = grp.phi(g);
    V[k] = std::exp(cd(0.0, gt.chi10[k])) * gt.W[gv].adjoint() * eq.V[k] * (phi == 1 ? Wv : CMat(Wv.conjugate()));
    A10.at(static_cast<std::size_t>(g), static_cast<std::size_t>(v)) +=
        gt.theta[gv] - static_cast<double>(phi) * gt.theta[static_cast<std::size_t>(v)];
  }
  return complete_equivariant(gauged, std::move(V), std::move(A10), tol);
}

}  // namespace hberry::equivariant
