#include "hberry/mps.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace hberry::mps {

using gcomplex::Chain;
using gcomplex::Cochain;
using gcomplex::Coeff;
using numerics::branch_lift;

namespace {

CMat transfer_of(const std::vector<CMat>& a, const std::vector<CMat>& b) {
  const Eigen::Index d0 = a[0].rows(), d1 = b[0].rows();
  CMat t = CMat::Zero(d0 * d1, d0 * d1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (Eigen::Index r0 = 0; r0 < d0; ++r0)
      for (Eigen::Index c0 = 0; c0 < d0; ++c0) {
        const cd x = a[i](r0, c0);
        if (x == cd(0.0)) continue;
        t.block(r0 * d1, c0 * d1, d1, d1) += x * b[i].conjugate();
      }
  }
  return t;
}

// Hermitian positive fixed point from a dominant eigenvector.
CMat hermitian_fixed_point(const CVec& v, Eigen::Index d) {
  CMat x = numerics::unvec_rm(v, d, d);
  cd tr = x.trace();
  if (std::abs(tr) < 1e-14) throw Error(ErrorCode::NotNormalizable, "fixed point has vanishing trace");
  x *= std::conj(tr) / std::abs(tr);
  return 0.5 * (x + x.adjoint());
}

}  // namespace

CMat mixed_transfer(const MPSTensor& a, const MPSTensor& b) {
  if (a.n() != b.n()) throw Error(ErrorCode::DimensionMismatch, "physical dimensions differ");
  return transfer_of(a.A, b.A);
}

MPSTensor right_canonicalize(const std::vector<CMat>& raw, double trunc_tol, double gap_tol) {
  if (raw.empty()) throw Error(ErrorCode::DimensionMismatch, "empty tensor");
  const Eigen::Index d = raw[0].rows();
  for (const auto& m : raw) {
    if (m.rows() != d || m.cols() != d) throw Error(ErrorCode::DimensionMismatch, "site matrices must be D x D");
    if (!numerics::all_finite(m)) throw Error(ErrorCode::NonFinite, "tensor entries");
  }
  // Right fixed point sum A R A+ = eta R; a degenerate top of the spectrum means several blocks.
  numerics::EigenPair ep;
  try {
    ep = numerics::dominant_eigenpair(transfer_of(raw, raw), gap_tol);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::DegenerateDominantEigenvalue) throw Error(ErrorCode::NotInjective, e.detail());
    throw;
  }
  if (std::abs(ep.value) < 1e-300) throw Error(ErrorCode::NotNormalizable, "transfer spectrum vanishes");
  const double eta = std::abs(ep.value);
  CMat R = hermitian_fixed_point(ep.vector, d);
  Eigen::SelfAdjointEigenSolver<CMat> er(R);
  const double rmax = er.eigenvalues().cwiseAbs().maxCoeff();
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = 0; k < d; ++k)
    if (er.eigenvalues()(k) > 1e-13 * rmax) keep.push_back(k);
  const auto dk = static_cast<Eigen::Index>(keep.size());
  CMat Y(d, dk), Yinv(dk, d);
  for (Eigen::Index k = 0; k < dk; ++k) {
    const double s = std::sqrt(er.eigenvalues()(keep[static_cast<std::size_t>(k)]));
    Y.col(k) = er.eigenvectors().col(keep[static_cast<std::size_t>(k)]) * s;
    Yinv.row(k) = er.eigenvectors().col(keep[static_cast<std::size_t>(k)]).adjoint() / s;
  }
  std::vector<CMat> a1;
  for (const auto& m : raw) a1.push_back(Yinv * m * Y / std::sqrt(eta));
  // Left fixed point sum A+ L A = L, then rotate to its eigenbasis.
  std::vector<CMat> dag;
  for (const auto& m : a1) dag.push_back(m.adjoint());
  auto el = numerics::dominant_eigenpair(transfer_of(dag, dag), 0.0);
  CMat L = hermitian_fixed_point(el.vector, dk);
  L /= L.trace().real();
  Eigen::SelfAdjointEigenSolver<CMat> es(L);
  std::vector<Eigen::Index> order;
  for (Eigen::Index k = dk - 1; k >= 0; --k)
    if (es.eigenvalues()(k) > trunc_tol * trunc_tol) order.push_back(k);
  const auto dn = static_cast<Eigen::Index>(order.size());
  if (dn == 0) throw Error(ErrorCode::NotNormalizable, "no Schmidt value above trunc_tol");
  CMat W(dk, dn);
  MPSTensor out;
  out.lambda.resize(dn);
  for (Eigen::Index k = 0; k < dn; ++k) {
    W.col(k) = es.eigenvectors().col(order[static_cast<std::size_t>(k)]);
    out.lambda(k) = std::sqrt(es.eigenvalues()(order[static_cast<std::size_t>(k)]));
  }
  out.lambda /= out.lambda.norm();
  for (const auto& m : a1) out.A.push_back(W.adjoint() * m * W);
  return out;
}

double canonical_residual(const MPSTensor& t) {
  const Eigen::Index d = t.D();
  CMat right = CMat::Zero(d, d), left = CMat::Zero(d, d);
  CMat l2 = t.lambda.array().square().matrix().cast<cd>().asDiagonal();
  for (const auto& a : t.A) {
    right += a * a.adjoint();
    left += a.adjoint() * l2 * a;
  }
  double r = (right - CMat::Identity(d, d)).norm();
  r = std::max(r, (left - l2).norm());
  r = std::max(r, std::abs(t.lambda.squaredNorm() - 1.0));
  return r;
}

InjectivityReport injectivity_check(const MPSTensor& t, double gap_tol, double canon_tol) {
  const double cr = canonical_residual(t);
  if (cr > canon_tol) throw Error(ErrorCode::NotCanonical, "canonical residual " + std::to_string(cr));
  numerics::EigenPair ep;
  try {
    ep = numerics::dominant_eigenpair(mixed_transfer(t, t), gap_tol);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::DegenerateDominantEigenvalue) throw Error(ErrorCode::NotInjective, e.detail());
    throw;
  }
  if (std::abs(ep.value - cd(1.0)) > 1e3 * canon_tol) {
    throw Error(ErrorCode::NotCanonical, "dominant transfer eigenvalue is not 1");
  }
  CMat x = numerics::unvec_rm(ep.vector, t.D(), t.D());
  CMat id = CMat::Identity(t.D(), t.D()) / std::sqrt(static_cast<double>(t.D()));
  if ((x - id).norm() > 1e3 * canon_tol) throw Error(ErrorCode::NotCanonical, "fixed point is not the identity");
  return {ep.value, ep.gap_ratio, cr};
}

EdgeOverlap edge_overlap(const MPSTensor& t0, const MPSTensor& t1, double gap_tol) {
  numerics::EigenPair ep;
  try {
    ep = numerics::dominant_eigenpair(mixed_transfer(t0, t1), gap_tol);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::DegenerateDominantEigenvalue) throw Error(ErrorCode::NotClose, e.detail());
    throw;
  }
  return {ep.value, numerics::unvec_rm(ep.vector, t0.D(), t1.D()), ep.gap_ratio};
}

MPSTensor apply_gauge(const MPSTensor& t, double theta, const CMat& W) {
  CMat lam = t.lambda.cast<cd>().asDiagonal();
  if ((W * lam - lam * W).norm() > 1e-10) throw Error(ErrorCode::GaugeNotBlockDiagonal, "W does not commute with Lambda");
  MPSTensor out;
  out.lambda = t.lambda;
  const cd ph = std::exp(cd(0.0, theta));
  for (const auto& a : t.A) out.A.push_back(ph * W.adjoint() * a * W);
  return out;
}

CMat MPSFamily::X(int a, int b) const {
  if (a == b) {
    const int d = tensors[static_cast<std::size_t>(a)].D();
    return CMat::Identity(d, d) / std::sqrt(static_cast<double>(d));
  }
  auto r = complex->locate({a, b});
  const auto& e = edges[static_cast<std::size_t>(r.index)];
  return r.sign > 0 ? e.X : CMat(e.X.adjoint());
}

cd MPSFamily::mu(int a, int b) const {
  if (a == b) return 1.0;
  auto r = complex->locate({a, b});
  const auto& e = edges[static_cast<std::size_t>(r.index)];
  return r.sign > 0 ? e.mu : std::conj(e.mu);
}

double MPSFamily::min_gap() const {
  double g = 1.0;
  for (const auto& e : edges) g = std::min(g, 1.0 - e.gap_ratio);
  return g;
}

MPSFamily build_family(std::shared_ptr<const gcomplex::GComplex> complex, std::vector<MPSTensor> tensors,
                       const Tolerances& tol) {
  if (tensors.size() != complex->num_vertices()) throw Error(ErrorCode::MeshMismatch, "one tensor per vertex");
  MPSFamily fam;
  fam.complex = std::move(complex);
  fam.tensors = std::move(tensors);
  const auto& c = *fam.complex;
  fam.edges.resize(c.count(1));
  numerics::parallel_for(c.count(1), [&](std::size_t e) {
    const auto& s = c.simplex(1, e);
    try {
      fam.edges[e] = edge_overlap(fam.tensors[static_cast<std::size_t>(s[0])], fam.tensors[static_cast<std::size_t>(s[1])],
                                  tol.gap_tol);
    } catch (const Error& err) {
      throw Error(err.code(), "edge (" + std::to_string(s[0]) + "," + std::to_string(s[1]) + "): " + err.detail());
    }
  });
  compute_connections(fam, tol);
  return fam;
}

double higher_connection(const MPSFamily& fam, std::size_t tri, double wilson_tol) {
  const auto& s = fam.complex->simplex(2, tri);
  auto w = [&](int v) {
    return fam.tensors[static_cast<std::size_t>(v)].lambda.array().pow(2.0 / 3.0).matrix().cast<cd>().asDiagonal();
  };
  CMat m = CMat(w(s[0])) * fam.X(s[0], s[1]) * CMat(w(s[1])) * fam.X(s[1], s[2]) * CMat(w(s[2])) * fam.X(s[2], s[0]);
  const cd tr = m.trace();
  if (std::abs(tr) < wilson_tol) throw Error(ErrorCode::VanishingWilsonLoop, "triangle " + std::to_string(tri));
  return std::arg(tr);
}

void compute_connections(MPSFamily& fam, const Tolerances& tol) {
  const auto& c = *fam.complex;
  fam.A01 = Cochain(0, 1, 1, c.count(1), Coeff::Angle);
  for (std::size_t e = 0; e < c.count(1); ++e) fam.A01.at(0, e) = fam.edges[e].A01();
  if (c.dim() >= 2) {
    fam.A02 = Cochain(0, 2, 1, c.count(2), Coeff::Angle);
    numerics::parallel_for(c.count(2), [&](std::size_t t) { fam.A02.at(0, t) = higher_connection(fam, t, tol.wilson_tol); });
  }
}

namespace {

Cochain lifted(const Cochain& f) {
  Cochain r(f.p(), f.q(), f.group_order(), f.nsimp(), Coeff::Real);
  for (std::size_t k = 0; k < f.data().size(); ++k) r.data()[k] = branch_lift(f.data()[k]);
  return r;
}

QuantizedResult quantize(const Cochain& F, const Chain& ch, const Tolerances& tol) {
  QuantizedResult res;
  double sum = 0.0;
  for (const auto& [i, co] : ch.terms()) {
    const double f = F.at(0, static_cast<std::size_t>(i));
    res.max_abs_flux = std::max(res.max_abs_flux, std::abs(f));
    if (std::abs(f) >= tol.flux_guard) {
      throw Error(ErrorCode::FluxGuardExceeded, "simplex " + std::to_string(i) + " flux " + std::to_string(f));
    }
    sum += static_cast<double>(co) * f;
  }
  res.raw = sum / kTwoPi;
  res.value = std::llround(res.raw);
  res.residual = std::abs(res.raw - static_cast<double>(res.value));
  return res;
}

}  // namespace

Cochain flux2(const MPSFamily& fam) { return lifted(d(*fam.complex, fam.A01)); }
Cochain flux3(const MPSFamily& fam) { return lifted(d(*fam.complex, fam.A02)); }

QuantizedResult ddks(const MPSFamily& fam, const Chain& volume, const Tolerances& tol) {
  if (volume.q() != 3) throw Error(ErrorCode::DimensionMismatch, "ddks needs a 3-chain");
  if (!boundary(*fam.complex, volume).empty()) throw Error(ErrorCode::NotACycle, "volume has boundary");
  return quantize(flux3(fam), volume, tol);
}

QuantizedResult chern_from_A01(const MPSFamily& fam, const Chain& surface, const Tolerances& tol) {
  if (surface.q() != 2) throw Error(ErrorCode::DimensionMismatch, "chern needs a 2-chain");
  if (!boundary(*fam.complex, surface).empty()) throw Error(ErrorCode::NotACycle, "surface has boundary");
  return quantize(flux2(fam), surface, tol);
}

namespace {

// sum_i (u B)^i (x) conj(B^i) for a D0 x D1 block B, as a (D0^2) x (D1^2) matrix.
CMat charged_block(const std::vector<CMat>& b, const CMat& u) {
  const Eigen::Index d0 = b[0].rows(), d1 = b[0].cols();
  CMat out = CMat::Zero(d0 * d0, d1 * d1);
  for (std::size_t i = 0; i < b.size(); ++i) {
    CMat ub = CMat::Zero(d0, d1);
    for (std::size_t j = 0; j < b.size(); ++j) ub += u(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * b[j];
    for (Eigen::Index r = 0; r < d0; ++r)
      for (Eigen::Index c = 0; c < d1; ++c) out.block(r * d0, c * d1, d0, d1) += ub(r, c) * b[i].conjugate();
  }
  return out;
}

}  // namespace

double soliton_charge(const MPSFamily& fam, const std::vector<int>& loop, int g) {
  const auto& c = *fam.complex;
  if (!c.has_action()) throw Error(ErrorCode::PreconditionViolated, "complex has no group action");
  if (c.group().phi(g) != 1) throw Error(ErrorCode::NotStabilized, "soliton charge needs a unitary element");
  if (loop.empty()) throw Error(ErrorCode::PreconditionViolated, "empty loop");
  for (int v : loop) {
    if (!c.fixes_vertex(g, v)) throw Error(ErrorCode::NotStabilized, "vertex " + std::to_string(v));
  }
  const CMat& u = c.group().u(g);
  const std::size_t N = loop.size();
  CMat acc;
  for (std::size_t x = 0; x < N; ++x) {
    const int a = loop[x], b = loop[(x + 1) % N];
    const CMat Xab = fam.X(a, b);
    std::vector<CMat> blk;
    for (const auto& m : fam.tensors[static_cast<std::size_t>(a)].A) blk.push_back(m * Xab);
    CMat e = charged_block(blk, u);
    acc = x == 0 ? e : CMat(acc * e);
  }
  const cd lgl = acc.trace();
  const auto& t1 = fam.tensors[static_cast<std::size_t>(loop[0])];
  CMat e1 = charged_block(t1.A, u);
  CMat p = CMat::Identity(e1.rows(), e1.cols());
  for (std::size_t x = 0; x < N; ++x) p = p * e1;
  const cd ref = p.trace();
  if (std::abs(lgl) < 1e-300 || std::abs(ref) < 1e-300) throw Error(ErrorCode::VanishingNorm, "soliton norm");
  return numerics::reduce_angle(std::arg(lgl) - std::arg(ref));
}

}  // namespace hberry::mps
