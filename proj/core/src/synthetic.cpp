#include "hberry/synthetic.hpp"

#include <functional>
#include <random>

#include "hberry/models.hpp"

namespace hberry::synthetic {

using gcomplex::Chain;
using gcomplex::GComplex;

std::shared_ptr<const GroupData> antipodal_group(int two_s) {
  GroupElementSpec s = models::group_rep("T", two_s);
  s.name = "sigma";
  s.param = -RMat::Identity(4, 4);
  return std::make_shared<const GroupData>(GroupData::generate({s}));
}

mps::MPSFamily glued_family(int refinements, int two_s, const mps::Tolerances& tol) {
  auto c = std::make_shared<const GComplex>(
      gcomplex::attach_action(gcomplex::build_sphere_complex(3, refinements), antipodal_group(two_s)));
  std::vector<mps::MPSTensor> tensors(c->num_vertices());
  numerics::parallel_for(tensors.size(), [&](std::size_t v) {
    const RVec& n = c->coord(static_cast<int>(v));
    RVec m = n;
    m(0) = n(0) * n(0) - 0.5;
    tensors[v] = models::ground_mps(m.normalized(), two_s, tol.trunc_tol);
  });
  return mps::build_family(c, std::move(tensors), tol);
}

namespace {

using Fn = std::function<double(const RVec&)>;

GroupElementSpec shift(const std::string& name, bool first, bool second) {
  GroupElementSpec s;
  s.name = name;
  s.param = RMat::Identity(4, 4);
  if (first) s.param.topLeftCorner(2, 2) *= -1.0;
  if (second) s.param.bottomRightCorner(2, 2) *= -1.0;
  s.u = CMat::Identity(2, 2);
  s.u(1, 1) = -1.0;
  return s;
}

// A^1 = 1 + sum even_k M_k f_k(x), A^2 = sum odd_k N_k f_k(x), random M, N.
std::vector<mps::MPSTensor> smooth_tensors(const GComplex& c, const std::vector<Fn>& even, const std::vector<Fn>& odd,
                                           std::uint64_t seed, double trunc_tol) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  auto rnd = [&](double scale) {
    CMat m(2, 2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) m(i, j) = scale * cd(nd(rng), nd(rng));
    return m;
  };
  std::vector<CMat> me, mo;
  for (std::size_t k = 0; k < even.size(); ++k) me.push_back(rnd(0.4));
  for (std::size_t k = 0; k < odd.size(); ++k) mo.push_back(rnd(0.6));
  std::vector<mps::MPSTensor> out(c.num_vertices());
  numerics::parallel_for(out.size(), [&](std::size_t v) {
    const RVec& x = c.coord(static_cast<int>(v));
    CMat a1 = CMat::Identity(2, 2), a2 = CMat::Zero(2, 2);
    for (std::size_t k = 0; k < even.size(); ++k) a1 += me[k] * even[k](x);
    for (std::size_t k = 0; k < odd.size(); ++k) a2 += mo[k] * odd[k](x);
    out[v] = mps::right_canonicalize({a1, a2}, trunc_tol);
  });
  return out;
}

int grid_id(int n, int i, int j) { return ((j + n) % n) * n + (i + n) % n; }

// Cells [i0, i1) x [j0, j1), oriented as the grid.
Chain block(const GComplex& c, int n, int i0, int i1, int j0, int j1) {
  Chain ch(2);
  for (int j = j0; j < j1; ++j) {
    for (int i = i0; i < i1; ++i) {
      for (const auto& tri : {std::vector<int>{grid_id(n, i, j), grid_id(n, i + 1, j), grid_id(n, i + 1, j + 1)},
                              std::vector<int>{grid_id(n, i, j), grid_id(n, i + 1, j + 1), grid_id(n, i, j + 1)}}) {
        const auto r = c.locate(tri);
        ch.add(r.index, r.sign);
      }
    }
  }
  return ch;
}

std::shared_ptr<const GComplex> grid_with(int n, const std::vector<GroupElementSpec>& gens) {
  if (n < 4 || n % 2) throw Error(ErrorCode::PreconditionViolated, "grid size must be even and >= 4");
  return std::make_shared<const GComplex>(gcomplex::attach_action(
      gcomplex::build_torus_grid(n, n), std::make_shared<const GroupData>(GroupData::generate(gens))));
}

}  // namespace

CylinderFamily cylinder_family(int n, std::uint64_t seed, const mps::Tolerances& tol) {
  auto c = grid_with(n, {shift("s1", false, true)});
  const std::vector<Fn> even = {[](const RVec& x) { return x(0); }, [](const RVec& x) { return x(1); },
                                [](const RVec& x) { return x(2) * x(3); },
                                [](const RVec& x) { return x(2) * x(2) - x(3) * x(3); }};
  const std::vector<Fn> odd = {[](const RVec& x) { return x(2); }, [](const RVec& x) { return x(3); },
                               [](const RVec& x) { return x(0) * x(2); }, [](const RVec& x) { return x(1) * x(3); }};
  CylinderFamily out;
  out.fam = mps::build_family(c, smooth_tensors(*c, even, odd, seed, tol.trunc_tol), tol);
  out.s1 = c->group().find("s1");
  out.strip = block(*c, n, 0, n, 0, n / 2);
  std::vector<int> row;
  for (int i = n; i >= 0; --i) row.push_back(grid_id(n, i, 0));
  out.base = gcomplex::path_chain(*c, row);
  return out;
}

TorusFamily torus_family(int n, std::uint64_t seed, const mps::Tolerances& tol) {
  auto c = grid_with(n, {shift("s1", false, true), shift("s2", true, false)});
  const std::vector<Fn> even = {[](const RVec& x) { return x(0) * x(1); },
                                [](const RVec& x) { return x(0) * x(0) - x(1) * x(1); },
                                [](const RVec& x) { return x(2) * x(3); },
                                [](const RVec& x) { return x(2) * x(2) - x(3) * x(3); }};
  const std::vector<Fn> odd = {[](const RVec& x) { return x(0) * x(2); }, [](const RVec& x) { return x(0) * x(3); },
                               [](const RVec& x) { return x(1) * x(2); }, [](const RVec& x) { return x(1) * x(3); }};
  TorusFamily out;
  out.fam = mps::build_family(c, smooth_tensors(*c, even, odd, seed, tol.trunc_tol), tol);
  out.s1 = c->group().find("s1");
  out.s2 = c->group().find("s2");
  out.plaquette = -block(*c, n, 0, n / 2, 0, n / 2);
  std::vector<int> bottom, left;
  for (int k = 0; k <= n / 2; ++k) {
    bottom.push_back(grid_id(n, k, 0));
    left.push_back(grid_id(n, 0, k));
  }
  out.bottom = gcomplex::path_chain(*c, bottom);
  out.left = gcomplex::path_chain(*c, left);
  return out;
}

}  // namespace hberry::synthetic
