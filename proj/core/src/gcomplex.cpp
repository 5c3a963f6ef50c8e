#include "hberry/gcomplex.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <nlohmann/json.hpp>
#include <sstream>

namespace hberry::gcomplex {

namespace {

constexpr double kHashScale = 1e7;

std::string vertex_key(const RVec& x) {
  std::ostringstream os;
  for (Eigen::Index i = 0; i < x.size(); ++i) os << std::llround(x(i) * kHashScale) << ',';
  return os.str();
}

// Sorts in place, returning the permutation parity (+1 even, -1 odd).
int sort_with_parity(std::vector<int>& v) {
  int sign = 1;
  for (std::size_t i = 1; i < v.size(); ++i) {
    for (std::size_t j = i; j > 0 && v[j - 1] > v[j]; --j) {
      std::swap(v[j - 1], v[j]);
      sign = -sign;
    }
  }
  return sign;
}

void add_subsets(const Simplex& s, std::vector<std::vector<Simplex>>& out) {
  const int n = static_cast<int>(s.size());
  for (int mask = 1; mask < (1 << n); ++mask) {
    Simplex sub;
    for (int k = 0; k < n; ++k)
      if (mask & (1 << k)) sub.push_back(s[static_cast<std::size_t>(k)]);
    out[sub.size() - 1].push_back(sub);
  }
}

double orientation_det(const std::vector<RVec>& coords, const Simplex& s) {
  const auto n = static_cast<Eigen::Index>(s.size());
  RMat m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) m.row(r) = coords[static_cast<std::size_t>(s[static_cast<std::size_t>(r)])].transpose();
  return m.determinant();
}

RVec normalized(const RVec& x) { return x / x.norm(); }

}  // namespace

GComplex GComplex::from_top_simplices(std::vector<RVec> coords, const std::vector<Simplex>& tops,
                                      const std::vector<int>& signs) {
  if (tops.empty() || tops.size() != signs.size()) {
    throw Error(ErrorCode::DimensionMismatch, "top simplex list");
  }
  GComplex c;
  c.coords_ = std::move(coords);
  const std::size_t top = tops[0].size() - 1;
  std::vector<std::vector<Simplex>> all(top + 1);
  std::vector<std::pair<Simplex, int>> sorted_tops;
  for (std::size_t i = 0; i < tops.size(); ++i) {
    Simplex s = tops[i];
    if (s.size() != top + 1) throw Error(ErrorCode::DimensionMismatch, "mixed simplex dimensions");
    int par = sort_with_parity(s);
    sorted_tops.emplace_back(s, par * signs[i]);
    add_subsets(s, all);
  }
  std::sort(sorted_tops.begin(), sorted_tops.end());
  c.simp_.resize(top + 1);
  c.lookup_.resize(top + 1);
  for (std::size_t q = 0; q <= top; ++q) {
    auto& v = all[q];
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    c.simp_[q] = v;
    for (std::size_t i = 0; i < v.size(); ++i) c.lookup_[q][v[i]] = static_cast<int>(i);
  }
  for (std::size_t i = 1; i < sorted_tops.size(); ++i) {
    if (sorted_tops[i].first == sorted_tops[i - 1].first) {
      throw Error(ErrorCode::NotSimplicial, "duplicate top simplex");
    }
  }
  c.top_sign_.resize(sorted_tops.size());
  for (const auto& [s, sg] : sorted_tops) c.top_sign_[static_cast<std::size_t>(c.lookup_[top][s])] = sg;
  if (c.simp_[0].size() != c.coords_.size()) {
    throw Error(ErrorCode::DimensionMismatch, "unused vertices in complex");
  }
  for (std::size_t v = 0; v < c.coords_.size(); ++v) c.vertex_hash_[vertex_key(c.coords_[v])] = static_cast<int>(v);
  c.build_faces();
  return c;
}

void GComplex::build_faces() {
  faces_.assign(simp_.size(), {});
  for (std::size_t q = 1; q < simp_.size(); ++q) {
    auto& f = faces_[q];
    f.resize(simp_[q].size() * (q + 1));
    for (std::size_t i = 0; i < simp_[q].size(); ++i) {
      for (std::size_t j = 0; j <= q; ++j) {
        Simplex s = simp_[q][i];
        s.erase(s.begin() + static_cast<std::ptrdiff_t>(j));
        f[i * (q + 1) + j] = lookup_[q - 1].at(s);
      }
    }
  }
}

RVec GComplex::barycenter(int q, std::size_t i) const {
  RVec b = RVec::Zero(ambient());
  for (int v : simplex(q, i)) b += coord(v);
  return b / static_cast<double>(q + 1);
}

std::optional<OrientedRef> GComplex::find(const std::vector<int>& ordered) const {
  if (ordered.empty() || ordered.size() > simp_.size()) return std::nullopt;
  Simplex s = ordered;
  int par = sort_with_parity(s);
  if (std::adjacent_find(s.begin(), s.end()) != s.end()) return std::nullopt;
  const auto& lk = lookup_[s.size() - 1];
  auto it = lk.find(s);
  if (it == lk.end()) return std::nullopt;
  return OrientedRef{it->second, par};
}

OrientedRef GComplex::locate(const std::vector<int>& ordered) const {
  auto r = find(ordered);
  if (!r) throw Error(ErrorCode::NotSimplicial, "simplex not in complex");
  return *r;
}

int GComplex::find_vertex(const RVec& x, double tol) const {
  auto it = vertex_hash_.find(vertex_key(x));
  if (it != vertex_hash_.end() && (coord(it->second) - x).norm() <= tol) return it->second;
  for (std::size_t v = 0; v < coords_.size(); ++v) {
    if ((coords_[v] - x).norm() <= tol) return static_cast<int>(v);
  }
  return -1;
}

Chain GComplex::fundamental_class() const {
  Chain c(dim());
  for (std::size_t i = 0; i < count(dim()); ++i) c.add(static_cast<int>(i), top_sign_[i]);
  return c;
}

namespace {

struct Builder {
  std::vector<RVec> coords;
  std::map<std::pair<int, int>, int> mids;

  int midpoint(int a, int b) {
    auto key = std::minmax(a, b);
    auto it = mids.find(key);
    if (it != mids.end()) return it->second;
    coords.push_back(normalized(coords[static_cast<std::size_t>(a)] + coords[static_cast<std::size_t>(b)]));
    int idx = static_cast<int>(coords.size()) - 1;
    mids[key] = idx;
    return idx;
  }
};

// Diagonal key invariant under coordinate sign flips and the swap of coordinates 1 and 2.
std::array<double, 4> coord_signature(const RVec& x) {
  const double a1 = std::abs(x(1)), a2 = std::abs(x(2));
  return {std::abs(x(0)), std::abs(x(3)), std::min(a1, a2), std::max(a1, a2)};
}

bool lex_less(const std::vector<double>& a, const std::vector<double>& b, double tol) {
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] < b[k] - tol) return true;
    if (a[k] > b[k] + tol) return false;
  }
  return false;
}

std::vector<double> diagonal_key(const std::vector<RVec>& coords, int a, int b) {
  const RVec& xa = coords[static_cast<std::size_t>(a)];
  const RVec& xb = coords[static_cast<std::size_t>(b)];
  auto sa = coord_signature(xa), sb = coord_signature(xb);
  if (std::lexicographical_compare(sb.begin(), sb.end(), sa.begin(), sa.end())) std::swap(sa, sb);
  std::vector<double> key{(xa - xb).norm()};
  key.insert(key.end(), sa.begin(), sa.end());
  key.insert(key.end(), sb.begin(), sb.end());
  return key;
}

std::vector<Simplex> refine(Builder& b, const std::vector<Simplex>& tops) {
  std::vector<Simplex> out;
  for (const auto& s : tops) {
    if (s.size() == 2) {
      int m = b.midpoint(s[0], s[1]);
      out.push_back({s[0], m});
      out.push_back({m, s[1]});
    } else if (s.size() == 3) {
      int m01 = b.midpoint(s[0], s[1]), m12 = b.midpoint(s[1], s[2]), m02 = b.midpoint(s[0], s[2]);
      out.push_back({s[0], m01, m02});
      out.push_back({s[1], m01, m12});
      out.push_back({s[2], m02, m12});
      out.push_back({m01, m12, m02});
    } else {
      int m[4][4];
      for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) m[i][j] = m[j][i] = b.midpoint(s[static_cast<std::size_t>(i)], s[static_cast<std::size_t>(j)]);
      for (int i = 0; i < 4; ++i) {
        Simplex corner{s[static_cast<std::size_t>(i)]};
        for (int j = 0; j < 4; ++j)
          if (j != i) corner.push_back(m[i][j]);
        out.push_back(corner);
      }
      // Opposite midpoint pairs of the inner octahedron.
      const std::array<std::array<int, 2>, 3> diag{{{m[0][1], m[2][3]}, {m[0][2], m[1][3]}, {m[0][3], m[1][2]}}};
      std::size_t best = 0;
      auto best_key = diagonal_key(b.coords, diag[0][0], diag[0][1]);
      for (std::size_t k = 1; k < 3; ++k) {
        auto key = diagonal_key(b.coords, diag[k][0], diag[k][1]);
        if (lex_less(key, best_key, 1e-12)) {
          best = k;
          best_key = key;
        }
      }
      const auto& o1 = diag[(best + 1) % 3];
      const auto& o2 = diag[(best + 2) % 3];
      const std::array<int, 4> ring{o1[0], o2[0], o1[1], o2[1]};
      for (int k = 0; k < 4; ++k) out.push_back({diag[best][0], diag[best][1], ring[static_cast<std::size_t>(k)], ring[static_cast<std::size_t>((k + 1) % 4)]});
    }
  }
  return out;
}

// Inward normal followed by the tangent frame.
GComplex finish_sphere(const std::vector<RVec>& coords, const std::vector<Simplex>& tops) {
  const int frame = -1;
  std::vector<int> signs;
  signs.reserve(tops.size());
  for (const auto& s : tops) {
    Simplex t = s;
    int par = sort_with_parity(t);
    double det = orientation_det(coords, t);
    signs.push_back(frame * par * (det > 0 ? 1 : -1));
  }
  return GComplex::from_top_simplices(coords, tops, signs);
}

}  // namespace

GComplex build_sphere_complex(int dim, int refinements) {
  if (refinements < 0) throw Error(ErrorCode::PreconditionViolated, "negative refinements");
  if (dim == 1) {
    const int n = 1 << (refinements + 2);
    return build_polygon(n);
  }
  if (dim != 2 && dim != 3) throw Error(ErrorCode::UnsupportedDimension, "sphere dim " + std::to_string(dim));
  const int amb = dim + 1;
  Builder b;
  for (int i = 0; i < amb; ++i) {
    for (int s : {1, -1}) {
      RVec x = RVec::Zero(amb);
      x(i) = s;
      b.coords.push_back(x);
    }
  }
  std::vector<Simplex> tops;
  for (int mask = 0; mask < (1 << amb); ++mask) {
    Simplex s;
    for (int i = 0; i < amb; ++i) s.push_back(2 * i + ((mask >> i) & 1));
    tops.push_back(s);
  }
  for (int r = 0; r < refinements; ++r) tops = refine(b, tops);
  return finish_sphere(b.coords, tops);
}

GComplex build_polygon(int n) {
  if (n < 3) throw Error(ErrorCode::UnsupportedDimension, "polygon needs n >= 3");
  std::vector<RVec> coords;
  std::vector<Simplex> tops;
  std::vector<int> signs;
  for (int k = 0; k < n; ++k) {
    RVec x(2);
    const double a = kTwoPi * k / n;
    x << std::cos(a), std::sin(a);
    if (4 * k % n == 0) {
      x << std::round(x(0)), std::round(x(1));
    }
    coords.push_back(x);
    tops.push_back({k, (k + 1) % n});
    signs.push_back(1);
  }
  return GComplex::from_top_simplices(coords, tops, signs);
}

GComplex build_torus_grid(int nx, int ny) {
  if (nx < 3 || ny < 3) throw Error(ErrorCode::UnsupportedDimension, "torus grid needs >= 3 per side");
  std::vector<RVec> coords;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      RVec x(4);
      const double a = kTwoPi * i / nx, c = kTwoPi * j / ny;
      x << std::cos(a), std::sin(a), std::cos(c), std::sin(c);
      coords.push_back(x);
    }
  }
  auto id = [&](int i, int j) { return ((j + ny) % ny) * nx + (i + nx) % nx; };
  std::vector<Simplex> tops;
  std::vector<int> signs;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      tops.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      tops.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
      signs.push_back(1);
      signs.push_back(1);
    }
  }
  return GComplex::from_top_simplices(coords, tops, signs);
}

GComplex attach_action(const GComplex& c, std::shared_ptr<const GroupData> group) {
  if (group->ambient() != c.ambient()) throw Error(ErrorCode::DimensionMismatch, "group ambient dimension");
  GComplex out = c;
  const int G = group->order();
  out.group_ = group;
  out.vperm_.assign(static_cast<std::size_t>(G), std::vector<int>(c.num_vertices(), -1));
  for (int g = 0; g < G; ++g) {
    for (std::size_t v = 0; v < c.num_vertices(); ++v) {
      int w = c.find_vertex(group->param(g) * c.coord(static_cast<int>(v)));
      if (w < 0) {
        throw Error(ErrorCode::NotSimplicial, "element " + group->name(g) + " does not permute vertices");
      }
      out.vperm_[static_cast<std::size_t>(g)][v] = w;
    }
  }
  for (int g = 0; g < G; ++g) {
    for (int h = 0; h < G; ++h) {
      for (std::size_t v = 0; v < c.num_vertices(); ++v) {
        int lhs = out.act_vertex(group->mul(g, h), static_cast<int>(v));
        int rhs = out.act_vertex(g, out.act_vertex(h, static_cast<int>(v)));
        if (lhs != rhs) throw Error(ErrorCode::NotSimplicial, "action not compatible with group law");
      }
    }
  }
  out.sact_.assign(static_cast<std::size_t>(c.dim() + 1), {});
  for (int q = 0; q <= c.dim(); ++q) {
    auto& tab = out.sact_[static_cast<std::size_t>(q)];
    tab.assign(static_cast<std::size_t>(G), std::vector<OrientedRef>(c.count(q)));
    for (int g = 0; g < G; ++g) {
      for (std::size_t i = 0; i < c.count(q); ++i) {
        const auto& s = c.simplex(q, i);
        std::vector<int> img;
        for (int v : s) img.push_back(out.act_vertex(g, v));
        auto r = c.find(img);
        if (!r) throw Error(ErrorCode::NotSimplicial, "element " + group->name(g) + " does not permute simplices");
        if (r->index == static_cast<int>(i) && img != s) {
          throw Error(ErrorCode::NotSimplicial, "element " + group->name(g) + " maps a simplex to itself non-trivially");
        }
        tab[static_cast<std::size_t>(g)][i] = *r;
      }
    }
  }
  return out;
}

void Chain::add(int index, long long coeff) {
  if (coeff == 0) return;
  auto& v = terms_[index];
  v += coeff;
  if (v == 0) terms_.erase(index);
}

Chain Chain::operator+(const Chain& o) const {
  Chain r = *this;
  if (empty()) r.q_ = o.q_;
  for (const auto& [i, c] : o.terms_) r.add(i, c);
  return r;
}

Chain Chain::operator-(const Chain& o) const { return *this + (-o); }

Chain Chain::operator-() const { return *this * -1; }

Chain Chain::operator*(long long s) const {
  Chain r(q_);
  for (const auto& [i, c] : terms_) r.add(i, c * s);
  return r;
}

Chain vertex_chain(int v) {
  Chain c(0);
  c.add(v, 1);
  return c;
}

Chain boundary(const GComplex& c, const Chain& ch) {
  Chain r(ch.q() - 1);
  if (ch.q() == 0) return r;
  for (const auto& [i, co] : ch.terms()) {
    for (int j = 0; j <= ch.q(); ++j) r.add(c.face(ch.q(), static_cast<std::size_t>(i), j), (j % 2 ? -co : co));
  }
  return r;
}

Chain act(const GComplex& c, int g, const Chain& ch) {
  Chain r(ch.q());
  for (const auto& [i, co] : ch.terms()) {
    auto ref = c.act(g, ch.q(), static_cast<std::size_t>(i));
    r.add(ref.index, co * ref.sign);
  }
  return r;
}

Chain restrict_chain(const GComplex& c, const Chain& ch, const std::function<bool(const RVec&)>& pred) {
  Chain r(ch.q());
  for (const auto& [i, co] : ch.terms()) {
    if (pred(c.barycenter(ch.q(), static_cast<std::size_t>(i)))) r.add(i, co);
  }
  return r;
}

Chain path_chain(const GComplex& c, const std::vector<int>& verts) {
  Chain r(1);
  for (std::size_t k = 0; k + 1 < verts.size(); ++k) {
    auto ref = c.locate({verts[k], verts[k + 1]});
    r.add(ref.index, ref.sign);
  }
  return r;
}

Cochain::Cochain(int p, int q, int group_order, std::size_t nsimp, Coeff kind)
    : p_(p), q_(q), g_(group_order), nsimp_(nsimp), kind_(kind) {
  ntuples_ = 1;
  for (int k = 0; k < p; ++k) ntuples_ *= static_cast<std::size_t>(group_order);
  data_.assign(ntuples_ * nsimp_, 0.0);
}

Cochain Cochain::zero(const GComplex& c, int p, int q, Coeff kind) {
  const int G = c.has_action() ? c.group().order() : 1;
  const std::size_t n = (q >= 0 && q <= c.dim()) ? c.count(q) : 0;
  return Cochain(p, q, G, n, kind);
}

std::size_t Cochain::tuple(const std::vector<int>& gs) const {
  if (static_cast<int>(gs.size()) != p_) throw Error(ErrorCode::DimensionMismatch, "group tuple length");
  std::size_t t = 0;
  for (int g : gs) t = t * static_cast<std::size_t>(g_) + static_cast<std::size_t>(g);
  return t;
}

Cochain Cochain::operator+(const Cochain& o) const {
  if (o.p_ != p_ || o.q_ != q_ || o.data_.size() != data_.size()) throw Error(ErrorCode::DimensionMismatch, "cochain sum");
  Cochain r = *this;
  for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] += o.data_[k];
  return r;
}

Cochain Cochain::operator-(const Cochain& o) const { return *this + o * -1.0; }

Cochain Cochain::operator*(double s) const {
  Cochain r = *this;
  for (auto& v : r.data_) v *= s;
  return r;
}

double Cochain::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, kind_ == Coeff::Angle ? numerics::angle_distance(v, 0.0) : std::abs(v));
  return m;
}

Cochain d(const GComplex& c, const Cochain& f) {
  const int q1 = f.q() + 1;
  if (q1 > c.dim()) throw Error(ErrorCode::UnsupportedDegree, "d beyond top dimension");
  Cochain r(f.p(), q1, f.group_order(), c.count(q1), f.kind());
  for (std::size_t t = 0; t < f.ntuples(); ++t) {
    for (std::size_t s = 0; s < c.count(q1); ++s) {
      double acc = 0.0;
      for (int j = 0; j <= q1; ++j) {
        double v = f.at(t, static_cast<std::size_t>(c.face(q1, s, j)));
        acc += (j % 2) ? -v : v;
      }
      r.at(t, s) = acc;
    }
  }
  return r;
}

Cochain delta(const GComplex& c, const Cochain& f) {
  if (f.p() > 2) throw Error(ErrorCode::UnsupportedDegree, "delta for p > 2");
  if (!c.has_action()) throw Error(ErrorCode::PreconditionViolated, "complex has no group action");
  const GroupData& grp = c.group();
  const int G = grp.order();
  const int p = f.p();
  Cochain r(p + 1, f.q(), G, f.nsimp(), f.kind());
  std::vector<int> gs(static_cast<std::size_t>(p + 1), 0);
  for (std::size_t t = 0; t < r.ntuples(); ++t) {
    std::size_t tt = t;
    for (int k = p; k >= 0; --k) {
      gs[static_cast<std::size_t>(k)] = static_cast<int>(tt % static_cast<std::size_t>(G));
      tt /= static_cast<std::size_t>(G);
    }
    const std::vector<int> head(gs.begin() + 1, gs.end());
    const std::vector<int> init(gs.begin(), gs.end() - 1);
    std::vector<std::size_t> mid;
    for (int i = 0; i < p; ++i) {
      std::vector<int> m;
      for (int k = 0; k <= p; ++k) {
        if (k == i) {
          m.push_back(grp.mul(gs[static_cast<std::size_t>(k)], gs[static_cast<std::size_t>(k + 1)]));
          ++k;
        } else {
          m.push_back(gs[static_cast<std::size_t>(k)]);
        }
      }
      mid.push_back(f.tuple(m));
    }
    const std::size_t th = f.tuple(head), ti = f.tuple(init);
    const double phi = grp.phi(gs[0]);
    const int last = gs[static_cast<std::size_t>(p)];
    for (std::size_t s = 0; s < f.nsimp(); ++s) {
      double acc = phi * f.at(th, s);
      for (int i = 0; i < p; ++i) acc += ((i + 1) % 2 ? -1.0 : 1.0) * f.at(mid[static_cast<std::size_t>(i)], s);
      const double tail = f.at(ti, c.act(last, f.q(), s));
      acc += ((p + 1) % 2 ? -1.0 : 1.0) * tail;
      r.at(t, s) = acc;
    }
  }
  return r;
}

TotalCochain total_D(const GComplex& c, const TotalCochain& f) {
  if (f.empty()) throw Error(ErrorCode::DimensionMismatch, "empty total cochain");
  const int n = f[0].p() + f[0].q();
  for (std::size_t p = 0; p < f.size(); ++p) {
    if (f[p].p() != static_cast<int>(p) || f[p].p() + f[p].q() != n) {
      throw Error(ErrorCode::DimensionMismatch, "inconsistent total degree");
    }
  }
  TotalCochain out;
  for (int p = 0; p <= n + 1; ++p) {
    Cochain acc = Cochain::zero(c, p, n + 1 - p, f[0].kind());
    if (p >= 1 && static_cast<std::size_t>(p - 1) < f.size() && f[static_cast<std::size_t>(p - 1)].nsimp() > 0) {
      acc = acc + delta(c, f[static_cast<std::size_t>(p - 1)]);
    }
    if (static_cast<std::size_t>(p) < f.size() && n + 1 - p <= c.dim() && f[static_cast<std::size_t>(p)].nsimp() > 0) {
      Cochain df = d(c, f[static_cast<std::size_t>(p)]);
      acc = acc + (p % 2 ? df * -1.0 : df);
    }
    out.push_back(acc);
  }
  return out;
}

double pair(const Cochain& f, std::size_t tuple, const Chain& ch) {
  if (ch.empty()) return 0.0;
  if (f.q() != ch.q()) throw Error(ErrorCode::DimensionMismatch, "pairing degrees differ");
  double acc = 0.0;
  for (const auto& [i, co] : ch.terms()) acc += static_cast<double>(co) * f.at(tuple, static_cast<std::size_t>(i));
  return acc;
}

numerics::Angle pair_angle(const Cochain& f, std::size_t tuple, const Chain& ch) {
  return numerics::Angle(pair(f, tuple, ch));
}

namespace {

Chain map_chain(const GComplex& c, const RMat& m, const Chain& ch) {
  Chain r(ch.q());
  for (const auto& [i, co] : ch.terms()) {
    std::vector<int> img;
    for (int v : c.simplex(ch.q(), static_cast<std::size_t>(i))) {
      int w = c.find_vertex(m * c.coord(v));
      if (w < 0) throw Error(ErrorCode::NotSimplicial, "coordinate map does not permute vertices");
      img.push_back(w);
    }
    auto ref = c.locate(img);
    r.add(ref.index, co * ref.sign);
  }
  return r;
}

void expect(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::BadDecomposition, what);
}

void check_cuts(const GComplex& c, const std::vector<int>& axes) {
  const int top = c.dim();
  for (std::size_t i = 0; i < c.count(top); ++i) {
    for (int a : axes) {
      bool pos = false, neg = false;
      for (int v : c.simplex(top, i)) {
        pos |= c.coord(v)(a) > 1e-12;
        neg |= c.coord(v)(a) < -1e-12;
      }
      if (pos && neg) throw Error(ErrorCode::PredicateNotSimplicial, "simplex straddles a coordinate hyperplane");
    }
  }
}

constexpr double kEps = 1e-12;

NamedChains s2_domains(const GComplex& c) {
  check_cuts(c, {0, 1, 2});
  NamedChains out;
  const Chain s2 = c.fundamental_class();
  out["S2"] = s2;
  const RMat sigma = -RMat::Identity(3, 3);
  const Chain D = restrict_chain(c, s2, [](const RVec& x) { return x(2) > kEps; });
  const Chain E = boundary(c, D);
  const Chain C = restrict_chain(c, E, [](const RVec& x) { return x(1) > kEps; });
  expect(E == C + map_chain(c, sigma, C), "dD = C + sigma C");
  const Chain dC = boundary(c, C);
  int P = -1;
  for (const auto& [v, co] : dC.terms())
    if (co == -1) P = v;
  expect(P >= 0, "arc start");
  expect(dC == map_chain(c, sigma, vertex_chain(P)) - vertex_chain(P), "dC = sigma P - P");
  out["D"] = D;
  out["C"] = C;
  out["P"] = vertex_chain(P);
  RVec north(3), south(3);
  north << 0, 0, 1;
  south << 0, 0, -1;
  out["N"] = vertex_chain(c.find_vertex(north));
  out["S"] = vertex_chain(c.find_vertex(south));
  // Wedges between azimuth pi/2 and pi/2 + 2pi/n for the z-rotations by 2pi/n.
  for (int n : {2, 4}) {
    RMat rot = RMat::Identity(3, 3);
    const double a = kTwoPi / n;
    rot(0, 0) = std::round(std::cos(a));
    rot(0, 1) = -std::round(std::sin(a));
    rot(1, 0) = std::round(std::sin(a));
    rot(1, 1) = std::round(std::cos(a));
    const Chain W = restrict_chain(c, s2, [n](const RVec& x) {
      return n == 2 ? x(0) < -kEps : (x(0) < -kEps && x(1) > kEps);
    });
    const Chain dW = boundary(c, W);
    const Chain Cw = restrict_chain(c, dW, [](const RVec& x) { return std::abs(x(0)) < kEps && x(1) > kEps; });
    expect(dW == Cw - map_chain(c, rot, Cw), "dW = C - c_n C");
    const std::string tag = "W" + std::to_string(n);
    out[tag] = W;
    out[tag + "_C"] = Cw;
  }
  return out;
}

NamedChains s3_domains(const GComplex& c) {
  check_cuts(c, {0, 1, 2, 3});
  NamedChains out;
  const Chain s3 = c.fundamental_class();
  out["S3"] = s3;
  auto diag = [](double a, double b, double cc, double dd) {
    RMat m = RMat::Zero(4, 4);
    m.diagonal() << a, b, cc, dd;
    return m;
  };
  const RMat T = diag(1, -1, -1, -1), sigma = -RMat::Identity(4, 4);
  const RMat C2x = diag(1, 1, -1, -1), C2y = diag(1, -1, 1, -1);
  RVec pp = RVec::Zero(4), pm = RVec::Zero(4);
  pp(0) = 1;
  pm(0) = -1;
  const Chain Pp = vertex_chain(c.find_vertex(pp)), Pm = vertex_chain(c.find_vertex(pm));
  out["P+"] = Pp;
  out["P-"] = Pm;

  const Chain D3 = restrict_chain(c, s3, [](const RVec& x) { return x(3) > kEps; });
  const Chain E = boundary(c, D3);
  const Chain D2 = restrict_chain(c, E, [](const RVec& x) { return x(2) > kEps; });
  const Chain L = boundary(c, D2);
  const Chain D1 = restrict_chain(c, L, [](const RVec& x) { return x(1) > kEps; });
  expect(E == D2 + map_chain(c, T, D2), "dD3 = D2 + T D2");
  expect(L == D1 - map_chain(c, T, D1), "dD2 = D1 - T D1");
  expect(E == D2 - map_chain(c, sigma, D2), "dD3 = D2 - sigma D2");
  expect(L == D1 + map_chain(c, sigma, D1), "dD2 = D1 + sigma D1");
  expect(boundary(c, D1) == Pm - Pp, "dD1 = P- - P+");
  out["D3"] = D3;
  out["D2"] = D2;
  out["D1"] = D1;
  out["equator"] = E;
  out["pump_loop"] = D1 - map_chain(c, C2y, D1);

  for (int n : {2, 4}) {
    RMat rot = RMat::Identity(4, 4);
    const double a = kTwoPi / n;
    rot(1, 1) = std::round(std::cos(a));
    rot(1, 2) = std::round(std::sin(a));
    rot(2, 1) = -std::round(std::sin(a));
    rot(2, 2) = std::round(std::cos(a));
    const Chain W = restrict_chain(c, s3, [n](const RVec& x) {
      return n == 2 ? x(2) > kEps : (x(1) > kEps && x(2) < -kEps);
    });
    const Chain dW = boundary(c, W);
    const Chain F = restrict_chain(c, dW, [](const RVec& x) { return std::abs(x(2)) < kEps && x(1) > kEps; });
    expect(dW == F - map_chain(c, rot, F), "dD3 = D2 - C_n D2");
    const Chain loop = boundary(c, F);
    expect(map_chain(c, rot, loop) == loop, "C_n-invariant loop");
    const std::string tag = "C" + std::to_string(n) + "z_";
    out[tag + "D3"] = W;
    out[tag + "D2"] = F;
    out[tag + "loop"] = loop;
  }

  const Chain Q = restrict_chain(c, s3, [](const RVec& x) { return x(1) > kEps && x(2) > kEps; });
  const Chain dQ = boundary(c, Q);
  const Chain A = -restrict_chain(c, dQ, [](const RVec& x) { return std::abs(x(2)) < kEps; });
  const Chain B = restrict_chain(c, dQ, [](const RVec& x) { return std::abs(x(1)) < kEps; });
  expect(dQ == -A + B, "dD3_*++* = -D2_*+0* + D2_*0+*");
  const Chain Ap = restrict_chain(c, A, [](const RVec& x) { return x(3) > kEps; });
  const Chain Bm = restrict_chain(c, B, [](const RVec& x) { return x(3) < -kEps; });
  expect(A == Ap - map_chain(c, C2x, Ap), "D2_*+0* = D2_*+0+ - C2x D2_*+0+");
  expect(B == Bm - map_chain(c, C2y, Bm), "D2_*0+* = D2_*0+- - C2y D2_*0+-");
  const Chain dAp = boundary(c, Ap);
  const Chain D1x = restrict_chain(c, dAp, [](const RVec& x) { return std::abs(x(3)) < kEps; });
  const Chain D1z = -restrict_chain(c, dAp, [](const RVec& x) { return std::abs(x(1)) < kEps; });
  expect(dAp == D1x - D1z, "dD2_*+0+ = D1_*+00 - D1_*00+");
  const Chain dBm = boundary(c, Bm);
  const Chain D1y = -restrict_chain(c, dBm, [](const RVec& x) { return std::abs(x(3)) < kEps; });
  expect(dBm == map_chain(c, C2y, D1z) - D1y, "dD2_*0+- = C2y D1_*00+ - D1_*0+0");
  out["D3_*++*"] = Q;
  out["D2_*+0*"] = A;
  out["D2_*0+*"] = B;
  out["D2_*+0+"] = Ap;
  out["D2_*0+-"] = Bm;
  out["D1_*+00"] = D1x;
  out["D1_*0+0"] = D1y;
  out["D1_*00+"] = D1z;
  return out;
}

}  // namespace

NamedChains standard_domains(const GComplex& c) {
  if (c.dim() == 2 && c.ambient() == 3) return s2_domains(c);
  if (c.dim() == 3 && c.ambient() == 4) return s3_domains(c);
  NamedChains out;
  out["M"] = c.fundamental_class();
  return out;
}

std::string mesh_to_json(const GComplex& c, int indent) {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["dim"] = c.dim();
  j["ambient"] = c.ambient();
  auto& verts = j["vertices"] = nlohmann::ordered_json::array();
  for (const auto& x : c.coords()) {
    std::vector<double> v(x.data(), x.data() + x.size());
    verts.push_back(v);
  }
  auto& simp = j["simplices"] = nlohmann::ordered_json::object();
  for (int q = 1; q <= c.dim(); ++q) {
    auto arr = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < c.count(q); ++i) arr.push_back(c.simplex(q, i));
    simp[std::to_string(q)] = arr;
  }
  std::vector<int> signs;
  for (std::size_t i = 0; i < c.count(c.dim()); ++i) signs.push_back(c.top_sign(i));
  j["orientation"] = signs;
  if (c.has_action()) {
    auto arr = nlohmann::ordered_json::array();
    for (int g = 0; g < c.group().order(); ++g) {
      std::vector<int> perm;
      for (std::size_t v = 0; v < c.num_vertices(); ++v) perm.push_back(c.act_vertex(g, static_cast<int>(v)));
      arr.push_back({{"name", c.group().name(g)}, {"phi", c.group().phi(g)}, {"vertex_perm", perm}});
    }
    j["group"] = arr;
  }
  return j.dump(indent);
}

}  // namespace hberry::gcomplex
