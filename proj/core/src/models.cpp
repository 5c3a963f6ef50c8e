#include "hberry/models.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>
#include <cmath>

namespace hberry::models {

SpinOps spin_ops(int two_s) {
  if (two_s < 1) throw Error(ErrorCode::PreconditionViolated, "2S must be positive");
  const int d = two_s + 1;
  const double s = 0.5 * two_s;
  SpinOps o{CMat::Zero(d, d), CMat::Zero(d, d), CMat::Zero(d, d)};
  CMat sp = CMat::Zero(d, d);
  for (int k = 0; k < d; ++k) {
    const double m = s - k;
    o.z(k, k) = m;
    if (k > 0) sp(k - 1, k) = std::sqrt(s * (s + 1) - m * (m + 1));
  }
  CMat sm = sp.adjoint();
  o.x = 0.5 * (sp + sm);
  o.y = cd(0.0, -0.5) * (sp - sm);
  return o;
}

CMat pair_hamiltonian(const RVec& n, int two_s, Bond bond) {
  if (n.size() != 4) throw Error(ErrorCode::DimensionMismatch, "model point must be a 4-vector");
  if (bond == Bond::Intra && n(0) > 0) throw Error(ErrorCode::WrongSector, "intra bond needs n0 <= 0");
  if (bond == Bond::Inter && n(0) < 0) throw Error(ErrorCode::WrongSector, "inter bond needs n0 >= 0");
  const auto s = spin_ops(two_s);
  const int d = two_s + 1;
  const CMat id = CMat::Identity(d, d);
  const std::array<const CMat*, 3> ops{&s.x, &s.y, &s.z};
  CMat h = CMat::Zero(d * d, d * d);
  for (int a = 0; a < 3; ++a) {
    CMat first = kroneckerProduct(*ops[static_cast<std::size_t>(a)], id);
    CMat second = kroneckerProduct(id, *ops[static_cast<std::size_t>(a)]);
    // Intra order is L (x) R, inter order is R (x) L.
    CMat sr = bond == Bond::Intra ? second : first;
    CMat sl = bond == Bond::Intra ? first : second;
    h += n(a + 1) * (sr - sl) + std::abs(n(0)) * first * second;
  }
  return h;
}

CVec pair_ground_state(const CMat& h, double gap_tol) {
  Eigen::SelfAdjointEigenSolver<CMat> es(h);
  if (es.eigenvalues().size() > 1 && es.eigenvalues()(1) - es.eigenvalues()(0) < gap_tol) {
    throw Error(ErrorCode::DegenerateGroundState, "pair gap " + std::to_string(es.eigenvalues()(1) - es.eigenvalues()(0)));
  }
  CVec v = es.eigenvectors().col(0);
  numerics::canonicalize_phase(v);
  return v;
}

mps::MPSTensor ground_mps(const RVec& n, int two_s, double trunc_tol) {
  const int d = two_s + 1;
  mps::MPSTensor t;
  if (n(0) <= 0) {
    CVec psi = pair_ground_state(pair_hamiltonian(n, two_s, Bond::Intra));
    t.lambda = RVec::Ones(1);
    for (int i = 0; i < d * d; ++i) t.A.push_back(CMat::Constant(1, 1, psi(i)));
    return t;
  }
  CVec phi = pair_ground_state(pair_hamiltonian(n, two_s, Bond::Inter));
  CMat m(d, d);  // rows iR, cols iL
  for (int r = 0; r < d; ++r)
    for (int l = 0; l < d; ++l) m(r, l) = phi(r * d + l);
  auto sv = numerics::svd(m);
  int D = 0;
  while (D < sv.sigma.size() && sv.sigma(D) > trunc_tol) ++D;
  t.lambda = sv.sigma.head(D) / sv.sigma.head(D).norm();
  for (int il = 0; il < d; ++il)
    for (int ir = 0; ir < d; ++ir) {
      CMat a(D, D);
      for (int x = 0; x < D; ++x)
        for (int y = 0; y < D; ++y) a(x, y) = std::conj(sv.V(il, x)) * t.lambda(y) * sv.U(ir, y);
      t.A.push_back(a);
    }
  return t;
}

GroupElementSpec group_rep(const std::string& name, int two_s) {
  const auto s = spin_ops(two_s);
  auto both = [&](const CMat& op, double theta) {
    CMat e = numerics::expi_hermitian(op, theta);
    return CMat(kroneckerProduct(e, e));
  };
  auto diag4 = [](double a, double b, double c, double d) {
    RMat m = RMat::Zero(4, 4);
    m.diagonal() << a, b, c, d;
    return m;
  };
  GroupElementSpec g;
  g.name = name;
  if (name == "C2x") {
    g.u = both(s.x, kPi);
    g.param = diag4(1, 1, -1, -1);
  } else if (name == "C2y") {
    g.u = both(s.y, kPi);
    g.param = diag4(1, -1, 1, -1);
  } else if (name == "C2z") {
    g.u = both(s.z, kPi);
    g.param = diag4(1, -1, -1, 1);
  } else if (name == "T") {
    g.u = both(s.y, kPi);
    g.phi = -1;
    g.param = diag4(1, -1, -1, -1);
  } else if (name == "C2zT") {
    g.u = both(s.z, kPi) * both(s.y, kPi);
    g.phi = -1;
    g.param = diag4(1, 1, 1, -1);
  } else if (name == "Q4z") {
    g.u = both(s.z, kPi / 2);
    g.param = diag4(1, 0, 0, 1);
    g.param(1, 2) = 1;
    g.param(2, 1) = -1;
  } else {
    throw Error(ErrorCode::UnknownName, "model symmetry " + name);
  }
  return g;
}

std::shared_ptr<const GroupData> model_group(const std::vector<std::string>& names, int two_s) {
  if (names.empty()) return std::make_shared<const GroupData>(GroupData::trivial(4, (two_s + 1) * (two_s + 1)));
  std::vector<GroupElementSpec> gens;
  for (const auto& n : names) gens.push_back(group_rep(n, two_s));
  return std::make_shared<const GroupData>(GroupData::generate(gens));
}

mps::MPSFamily model_family(std::shared_ptr<const gcomplex::GComplex> complex, int two_s, const mps::Tolerances& tol) {
  if (complex->ambient() != 4) throw Error(ErrorCode::DimensionMismatch, "model family needs points of S3");
  std::vector<mps::MPSTensor> tensors(complex->num_vertices());
  numerics::parallel_for(tensors.size(), [&](std::size_t v) {
    try {
      tensors[v] = ground_mps(complex->coord(static_cast<int>(v)), two_s, tol.trunc_tol);
    } catch (const Error& e) {
      throw Error(e.code(), "vertex " + std::to_string(v) + ": " + e.detail());
    }
  });
  return mps::build_family(std::move(complex), std::move(tensors), tol);
}

}  // namespace hberry::models
