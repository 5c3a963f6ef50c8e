#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "hberry/group.hpp"
#include "hberry/numerics.hpp"

namespace hberry::gcomplex {

// Vertex indices in ascending order; the stored orientation of a simplex is this order.
using Simplex = std::vector<int>;

struct OrientedRef {
  int index;
  int sign;
};

struct SimplexHash {
  std::size_t operator()(const Simplex& s) const {
    std::size_t h = 1469598103934665603ull;
    for (int v : s) h = (h ^ static_cast<std::size_t>(v)) * 1099511628211ull;
    return h;
  }
};

class Chain;

class GComplex {
 public:
  // tops: top simplices in any vertex order; signs: orientation of each as given.
  static GComplex from_top_simplices(std::vector<RVec> coords, const std::vector<Simplex>& tops,
                                     const std::vector<int>& signs);

  int dim() const { return static_cast<int>(simp_.size()) - 1; }
  int ambient() const { return coords_.empty() ? 0 : static_cast<int>(coords_[0].size()); }
  std::size_t num_vertices() const { return coords_.size(); }
  std::size_t count(int q) const { return simp_[static_cast<std::size_t>(q)].size(); }
  const Simplex& simplex(int q, std::size_t i) const { return simp_[static_cast<std::size_t>(q)][i]; }
  const RVec& coord(int v) const { return coords_[static_cast<std::size_t>(v)]; }
  const std::vector<RVec>& coords() const { return coords_; }
  int top_sign(std::size_t i) const { return top_sign_[i]; }
  // Index of the j-th face (vertex j removed) of q-simplex i.
  int face(int q, std::size_t i, int j) const {
    return faces_[static_cast<std::size_t>(q)][i * static_cast<std::size_t>(q + 1) + static_cast<std::size_t>(j)];
  }
  RVec barycenter(int q, std::size_t i) const;

  // Oriented simplex given by vertex order; sign is the permutation parity to the stored order.
  std::optional<OrientedRef> find(const std::vector<int>& ordered) const;
  OrientedRef locate(const std::vector<int>& ordered) const;
  // Vertex at coordinate x within tol, or -1.
  int find_vertex(const RVec& x, double tol = 1e-9) const;

  Chain fundamental_class() const;

  bool has_action() const { return static_cast<bool>(group_); }
  const GroupData& group() const { return *group_; }
  std::shared_ptr<const GroupData> group_ptr() const { return group_; }
  int act_vertex(int g, int v) const { return vperm_[static_cast<std::size_t>(g)][static_cast<std::size_t>(v)]; }
  OrientedRef act(int g, int q, std::size_t i) const {
    return sact_[static_cast<std::size_t>(q)][static_cast<std::size_t>(g)][i];
  }
  bool fixes_vertex(int g, int v) const { return act_vertex(g, v) == v; }

  friend GComplex attach_action(const GComplex& c, std::shared_ptr<const GroupData> group);

 private:
  void build_faces();
  std::vector<RVec> coords_;
  std::vector<std::vector<Simplex>> simp_;
  std::vector<std::unordered_map<Simplex, int, SimplexHash>> lookup_;
  std::vector<std::vector<int>> faces_;
  std::vector<int> top_sign_;
  std::unordered_map<std::string, int> vertex_hash_;
  std::shared_ptr<const GroupData> group_;
  std::vector<std::vector<int>> vperm_;
  std::vector<std::vector<std::vector<OrientedRef>>> sact_;
};

// dim 1: 2^(r+2)-gon; dim 2: octahedron; dim 3: 16-cell boundary; r edge-midpoint refinements.
GComplex build_sphere_complex(int dim, int refinements);
// Regular n-gon on the unit circle with a vertex at angle 0.
GComplex build_polygon(int n);
// Periodic grid of nx x ny squares embedded in R^4 as (cos, sin, cos, sin).
GComplex build_torus_grid(int nx, int ny);

// Group elements act on coordinates by their param matrices.
GComplex attach_action(const GComplex& c, std::shared_ptr<const GroupData> group);

class Chain {
 public:
  Chain() = default;
  explicit Chain(int q) : q_(q) {}
  int q() const { return q_; }
  void add(int index, long long coeff);
  const std::map<int, long long>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  Chain operator+(const Chain& o) const;
  Chain operator-(const Chain& o) const;
  Chain operator-() const;
  Chain operator*(long long s) const;
  bool operator==(const Chain& o) const { return q_ == o.q_ && terms_ == o.terms_; }
  std::size_t size() const { return terms_.size(); }

 private:
  int q_ = 0;
  std::map<int, long long> terms_;
};

Chain vertex_chain(int v);
Chain boundary(const GComplex& c, const Chain& ch);
// Push-forward of the chain by g, orientation transported.
Chain act(const GComplex& c, int g, const Chain& ch);
// Keeps the terms whose simplex barycenter satisfies pred.
Chain restrict_chain(const GComplex& c, const Chain& ch, const std::function<bool(const RVec&)>& pred);
// Oriented edge chain through the given vertices (closed if first == last).
Chain path_chain(const GComplex& c, const std::vector<int>& verts);

enum class Coeff { Angle, Real };

// Bidegree (p, q); value of (g_1..g_p, stored q-simplex) at data[tuple * nsimp + s].
class Cochain {
 public:
  Cochain() = default;
  Cochain(int p, int q, int group_order, std::size_t nsimp, Coeff kind = Coeff::Angle);
  static Cochain zero(const GComplex& c, int p, int q, Coeff kind = Coeff::Angle);

  int p() const { return p_; }
  int q() const { return q_; }
  int group_order() const { return g_; }
  std::size_t nsimp() const { return nsimp_; }
  std::size_t ntuples() const { return ntuples_; }
  Coeff kind() const { return kind_; }

  std::size_t tuple(const std::vector<int>& gs) const;
  double& at(std::size_t tuple, std::size_t s) { return data_[tuple * nsimp_ + s]; }
  double at(std::size_t tuple, std::size_t s) const { return data_[tuple * nsimp_ + s]; }
  double at(std::size_t tuple, OrientedRef r) const { return r.sign * at(tuple, static_cast<std::size_t>(r.index)); }
  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  Cochain operator+(const Cochain& o) const;
  Cochain operator-(const Cochain& o) const;
  Cochain operator*(double s) const;
  // Largest |value| (Real) or distance to 0 mod 2pi (Angle).
  double max_abs() const;

 private:
  int p_ = 0, q_ = 0, g_ = 1;
  std::size_t nsimp_ = 0, ntuples_ = 1;
  Coeff kind_ = Coeff::Angle;
  std::vector<double> data_;
};

Cochain d(const GComplex& c, const Cochain& f);
Cochain delta(const GComplex& c, const Cochain& f);

// Components indexed by p, with p + q = n for all.
using TotalCochain = std::vector<Cochain>;
TotalCochain total_D(const GComplex& c, const TotalCochain& f);

// Sum of f(g-tuple, simplex) over the chain, as a real number.
double pair(const Cochain& f, std::size_t tuple, const Chain& ch);
numerics::Angle pair_angle(const Cochain& f, std::size_t tuple, const Chain& ch);

using NamedChains = std::map<std::string, Chain>;

// Integration domains selected by barycenter signs; chain identities verified on construction.
NamedChains standard_domains(const GComplex& c);

// Mesh export schema (schema_version 1).
std::string mesh_to_json(const GComplex& c, int indent = 1);

}  // namespace hberry::gcomplex
