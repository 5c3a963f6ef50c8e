#include "hberry/group.hpp"

#include <deque>

namespace hberry {

namespace {

constexpr double kMatchTol = 1e-9;

bool same(const GroupElementSpec& a, const RMat& param, const CMat& u, int phi) {
  if (a.phi != phi) return false;
  if ((a.param - param).cwiseAbs().maxCoeff() > kMatchTol) return false;
  if (a.u.size() != u.size()) return false;
  return u.size() == 0 || (a.u - u).cwiseAbs().maxCoeff() <= kMatchTol;
}

CMat twist(const CMat& u, int phi) { return phi == 1 ? u : CMat(u.conjugate()); }

}  // namespace

int GroupData::find(const RMat& param, const CMat& u, int phi) const {
  for (std::size_t k = 0; k < elems_.size(); ++k) {
    if (same(elems_[k], param, u, phi)) return static_cast<int>(k);
  }
  return -1;
}

int GroupData::find(const std::string& name) const {
  for (std::size_t k = 0; k < elems_.size(); ++k) {
    if (elems_[k].name == name) return static_cast<int>(k);
  }
  throw Error(ErrorCode::UnknownName, "group element " + name);
}

GroupData GroupData::generate(const std::vector<GroupElementSpec>& gens, std::size_t max_order) {
  if (gens.empty()) throw Error(ErrorCode::PreconditionViolated, "no generators");
  const auto amb = gens[0].param.rows();
  const auto hd = gens[0].u.rows();
  GroupData g;
  g.elems_.push_back({"e", RMat::Identity(amb, amb), CMat::Identity(hd, hd), 1});
  std::deque<int> queue{0};
  while (!queue.empty()) {
    int a = queue.front();
    queue.pop_front();
    for (const auto& s : gens) {
      const auto& ea = g.elems_[static_cast<std::size_t>(a)];
      RMat p = ea.param * s.param;
      CMat u = ea.u * twist(s.u, ea.phi);
      int phi = ea.phi * s.phi;
      if (g.find(p, u, phi) >= 0) continue;
      if (g.elems_.size() >= max_order) {
        throw Error(ErrorCode::PreconditionViolated, "group closure exceeds max order");
      }
      std::string nm = a == 0 ? s.name : ea.name + "*" + s.name;
      g.elems_.push_back({nm, p, u, phi});
      queue.push_back(static_cast<int>(g.elems_.size()) - 1);
    }
  }
  const int n = g.order();
  g.mul_.assign(static_cast<std::size_t>(n * n), -1);
  g.inv_.assign(static_cast<std::size_t>(n), -1);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const auto& ea = g.elems_[static_cast<std::size_t>(a)];
      const auto& eb = g.elems_[static_cast<std::size_t>(b)];
      int c = g.find(ea.param * eb.param, ea.u * twist(eb.u, ea.phi), ea.phi * eb.phi);
      if (c < 0) throw Error(ErrorCode::PreconditionViolated, "group not closed");
      g.mul_[static_cast<std::size_t>(a * n + b)] = c;
      if (c == 0) g.inv_[static_cast<std::size_t>(a)] = b;
    }
  }
  return g;
}

GroupData GroupData::trivial(int ambient, int hilbert_dim) {
  GroupData g;
  g.elems_.push_back({"e", RMat::Identity(ambient, ambient), CMat::Identity(hilbert_dim, hilbert_dim), 1});
  g.mul_ = {0};
  g.inv_ = {0};
  return g;
}

double GroupData::representation_residual() const {
  double r = 0.0;
  for (int a = 0; a < order(); ++a) {
    for (int b = 0; b < order(); ++b) {
      if (u(a).size() == 0) continue;
      CMat lhs = u(a) * twist(u(b), phi(a));
      r = std::max(r, (lhs - u(mul(a, b))).cwiseAbs().maxCoeff());
    }
  }
  return r;
}

CVec apply_rep(const GroupData& g, int elem, const CVec& v) {
  return g.phi(elem) == 1 ? CVec(g.u(elem) * v) : CVec(g.u(elem) * v.conjugate());
}

}  // namespace hberry
