#pragma once

#include <string>
#include <vector>

#include "hberry/numerics.hpp"

namespace hberry {

// Generator of a finite group acting on a parameter space (orthogonal matrix)
// and on a Hilbert space (u, with phi = -1 meaning u K).
struct GroupElementSpec {
  std::string name;
  RMat param;
  CMat u;
  int phi = 1;
};

class GroupData {
 public:
  // Closure of the generators under g*h = (P_g P_h, u_g u_h^{phi_g}, phi_g phi_h).
  static GroupData generate(const std::vector<GroupElementSpec>& gens, std::size_t max_order = 512);
  static GroupData trivial(int ambient, int hilbert_dim);

  int order() const { return static_cast<int>(elems_.size()); }
  static constexpr int identity() { return 0; }
  int mul(int g, int h) const { return mul_[static_cast<std::size_t>(g * order() + h)]; }
  int inv(int g) const { return inv_[static_cast<std::size_t>(g)]; }
  int phi(int g) const { return elems_[static_cast<std::size_t>(g)].phi; }
  const RMat& param(int g) const { return elems_[static_cast<std::size_t>(g)].param; }
  const CMat& u(int g) const { return elems_[static_cast<std::size_t>(g)].u; }
  const std::string& name(int g) const { return elems_[static_cast<std::size_t>(g)].name; }
  int ambient() const { return static_cast<int>(elems_[0].param.rows()); }
  int hilbert_dim() const { return static_cast<int>(elems_[0].u.rows()); }

  // Element with the given word name; throws UnknownName.
  int find(const std::string& name) const;
  // Element index matching the given data, or -1.
  int find(const RMat& param, const CMat& u, int phi) const;

  // max over (g,h) of |u_g u_h^{phi_g} - u_{gh}|
  double representation_residual() const;

 private:
  std::vector<GroupElementSpec> elems_;
  std::vector<int> mul_;
  std::vector<int> inv_;
};

// Applies g to a state vector: u_g v^{phi_g}.
CVec apply_rep(const GroupData& g, int elem, const CVec& v);

}  // namespace hberry
