#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <functional>

#include "hberry/errors.hpp"

namespace hberry {

using cd = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

namespace numerics {

// Reduce to [0, 2pi).
double reduce_angle(double a);

// Representative in (-pi, pi].
double branch_lift(double a);

// Distance between two angles on the circle.
double angle_distance(double a, double b);

class Angle {
 public:
  Angle() = default;
  Angle(double v) : v_(reduce_angle(v)) {}  // NOLINT
  double value() const { return v_; }
  double lifted() const { return branch_lift(v_); }
  Angle operator+(Angle o) const { return Angle(v_ + o.v_); }
  Angle operator-(Angle o) const { return Angle(v_ - o.v_); }
  Angle operator-() const { return Angle(-v_); }
  Angle operator*(double s) const { return Angle(v_ * s); }
  bool operator==(const Angle& o) const { return v_ == o.v_; }

 private:
  double v_ = 0.0;
};

struct EigenPair {
  cd value;
  CVec vector;
  double gap_ratio;  // |mu2| / |mu1|, 0 for 1x1
};

EigenPair dominant_eigenpair(const CMat& m, double gap_tol = 1e-6);

struct SVDResult {
  CMat U;
  RVec sigma;
  CMat V;
};

SVDResult svd(const CMat& m);

// Largest-modulus entry made real positive, ties to lowest flat (row-major) index.
void canonicalize_phase(CVec& v);
void canonicalize_phase(CMat& m);

// Closest unitary in Frobenius norm.
CMat polar_unitary(const CMat& m);

// exp(i * t * H) for Hermitian H.
CMat expi_hermitian(const CMat& h, double t);

bool all_finite(const CMat& m);

// Hilbert-Schmidt pairing (Y|X) = Tr[Y^dagger X].
cd hs_pair(const CMat& y, const CMat& x);

// Row-major vectorization helpers for D0 x D1 matrices.
CVec vec_rm(const CMat& x);
CMat unvec_rm(const CVec& v, Eigen::Index rows, Eigen::Index cols);

void set_num_threads(int n);
int num_threads();

// Runs fn(i) for i in [0, n) on the worker pool; results must go to disjoint slots.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace numerics
}  // namespace hberry
