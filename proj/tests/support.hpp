#pragma once

#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "hberry/gcomplex.hpp"
#include "hberry/models.hpp"

namespace hberry::fixtures {

inline std::shared_ptr<const gcomplex::GComplex> model_complex(int refinements, int two_s,
                                                              const std::vector<std::string>& names) {
  auto base = gcomplex::build_sphere_complex(3, refinements);
  if (names.empty()) return std::make_shared<const gcomplex::GComplex>(base);
  return std::make_shared<const gcomplex::GComplex>(gcomplex::attach_action(base, models::model_group(names, two_s)));
}

inline mps::MPSFamily model_family(int refinements, int two_s, const std::vector<std::string>& names = {}) {
  return models::model_family(model_complex(refinements, two_s, names), two_s);
}

inline int first_vertex(const gcomplex::Chain& c) { return c.terms().begin()->first; }

// Closed great circle through the given axes (a, b) of S3, one vertex per 2 pi / n.
inline std::vector<RVec> circle_points(int a, int b, int n) {
  std::vector<RVec> out;
  for (int k = 0; k < n; ++k) {
    RVec x = RVec::Zero(4);
    x(a) = std::cos(kTwoPi * k / n);
    x(b) = std::sin(kTwoPi * k / n);
    out.push_back(x);
  }
  return out;
}

// h on spins (p, q) of an n-spin register, p first, spin 0 most significant.
inline CMat embed_pair(const CMat& h, int d, int nspins, int p, int q) {
  int dim = 1;
  for (int k = 0; k < nspins; ++k) dim *= d;
  auto digit = [&](int b, int k) {
    for (int j = nspins - 1; j > k; --j) b /= d;
    return b % d;
  };
  auto stride = [&](int k) {
    int s = 1;
    for (int j = nspins - 1; j > k; --j) s *= d;
    return s;
  };
  CMat out = CMat::Zero(dim, dim);
  for (int b = 0; b < dim; ++b) {
    const int sp = digit(b, p), sq = digit(b, q);
    const int rest = b - sp * stride(p) - sq * stride(q);
    for (int tp = 0; tp < d; ++tp)
      for (int tq = 0; tq < d; ++tq) out(rest + tp * stride(p) + tq * stride(q), b) += h(tp * d + tq, sp * d + sq);
  }
  return out;
}

// Periodic N-site wavefunction, site index i = iL * d + iR.
inline CVec mps_wavefunction(const mps::MPSTensor& t, int N) {
  const int n = t.n();
  int dim = 1;
  for (int k = 0; k < N; ++k) dim *= n;
  CVec psi(dim);
  for (int b = 0; b < dim; ++b) {
    CMat m = CMat::Identity(t.D(), t.D());
    int r = b, div = dim;
    for (int k = 0; k < N; ++k) {
      div /= n;
      m = m * t.A[static_cast<std::size_t>(r / div)];
      r %= div;
    }
    psi(b) = m.trace();
  }
  return psi;
}

// Ring of model ground states on a great circle; the complex carries the given group.
inline mps::MPSFamily ring_family(const std::vector<RVec>& pts, int two_s, const std::vector<std::string>& names) {
  std::vector<gcomplex::Simplex> edges;
  const int n = static_cast<int>(pts.size());
  for (int k = 0; k < n; ++k) edges.push_back({k, (k + 1) % n});
  auto base = gcomplex::GComplex::from_top_simplices(pts, edges, std::vector<int>(edges.size(), 1));
  auto c = std::make_shared<const gcomplex::GComplex>(gcomplex::attach_action(base, models::model_group(names, two_s)));
  std::vector<mps::MPSTensor> t;
  for (const auto& p : pts) t.push_back(models::ground_mps(p, two_s));
  return mps::build_family(c, t);
}

inline std::vector<int> ring_order(int n) {
  std::vector<int> v;
  for (int k = 0; k < n; ++k) v.push_back(k);
  return v;
}

inline gcomplex::Chain closed_path(const gcomplex::GComplex& c, int n) {
  auto v = ring_order(n);
  v.push_back(0);
  return gcomplex::path_chain(c, v);
}

}  // namespace hberry::fixtures
