#include "hberry/numerics.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>
#include <vector>

namespace hberry {

const char* error_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::DegenerateDominantEigenvalue: return "DegenerateDominantEigenvalue";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorCode::NotSimplicial: return "NotSimplicial";
    case ErrorCode::UnsupportedDegree: return "UnsupportedDegree";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::PredicateNotSimplicial: return "PredicateNotSimplicial";
    case ErrorCode::VanishingOverlap: return "VanishingOverlap";
    case ErrorCode::NotACycle: return "NotACycle";
    case ErrorCode::FluxGuardExceeded: return "FluxGuardExceeded";
    case ErrorCode::EquivarianceViolated: return "EquivarianceViolated";
    case ErrorCode::NotFixedPoint: return "NotFixedPoint";
    case ErrorCode::BadDecomposition: return "BadDecomposition";
    case ErrorCode::NotQuantized: return "NotQuantized";
    case ErrorCode::DegenerateGroundState: return "DegenerateGroundState";
    case ErrorCode::NotNormalizable: return "NotNormalizable";
    case ErrorCode::NotInjective: return "NotInjective";
    case ErrorCode::NotCanonical: return "NotCanonical";
    case ErrorCode::NotClose: return "NotClose";
    case ErrorCode::VanishingWilsonLoop: return "VanishingWilsonLoop";
    case ErrorCode::GaugeNotBlockDiagonal: return "GaugeNotBlockDiagonal";
    case ErrorCode::NotStabilized: return "NotStabilized";
    case ErrorCode::VanishingNorm: return "VanishingNorm";
    case ErrorCode::NotProportionalToIdentity: return "NotProportionalToIdentity";
    case ErrorCode::SchmidtMismatch: return "SchmidtMismatch";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::NotFree: return "NotFree";
    case ErrorCode::WrongSector: return "WrongSector";
    case ErrorCode::UnknownName: return "UnknownName";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::CanonicalizationFailed: return "CanonicalizationFailed";
    case ErrorCode::MeshMismatch: return "MeshMismatch";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

namespace numerics {

double reduce_angle(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0) r += kTwoPi;
  if (r >= kTwoPi) r -= kTwoPi;
  return r;
}

double branch_lift(double a) {
  double r = reduce_angle(a);
  if (r > kPi) r -= kTwoPi;
  return r;
}

double angle_distance(double a, double b) { return std::abs(branch_lift(a - b)); }

bool all_finite(const CMat& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    if (!std::isfinite(m.data()[i].real()) || !std::isfinite(m.data()[i].imag())) return false;
  }
  return true;
}

namespace {

template <class F>
Eigen::Index pick_phase_entry(Eigen::Index n, F&& at) {
  double best = -1.0;
  for (Eigen::Index k = 0; k < n; ++k) best = std::max(best, std::abs(at(k)));
  const double thresh = best * (1.0 - 1e-12);
  for (Eigen::Index k = 0; k < n; ++k) {
    if (std::abs(at(k)) >= thresh) return k;
  }
  return 0;
}

}  // namespace

void canonicalize_phase(CVec& v) {
  if (v.size() == 0) return;
  Eigen::Index k = pick_phase_entry(v.size(), [&](Eigen::Index i) { return v(i); });
  double a = std::abs(v(k));
  if (a == 0.0) return;
  v *= std::conj(v(k)) / a;
  v(k) = cd(std::abs(v(k)), 0.0);
}

void canonicalize_phase(CMat& m) {
  if (m.size() == 0) return;
  const Eigen::Index c = m.cols();
  Eigen::Index k = pick_phase_entry(m.size(), [&](Eigen::Index i) { return m(i / c, i % c); });
  cd z = m(k / c, k % c);
  double a = std::abs(z);
  if (a == 0.0) return;
  m *= std::conj(z) / a;
  m(k / c, k % c) = cd(std::abs(m(k / c, k % c)), 0.0);
}

EigenPair dominant_eigenpair(const CMat& m, double gap_tol) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw Error(ErrorCode::DimensionMismatch, "dominant_eigenpair needs a nonempty square matrix");
  }
  if (!all_finite(m)) throw Error(ErrorCode::NonFinite, "dominant_eigenpair input");
  Eigen::ComplexEigenSolver<CMat> es(m, true);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::NonFinite, "eigensolver failed");
  const CVec& ev = es.eigenvalues();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(ev.size()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return std::abs(ev(a)) > std::abs(ev(b)); });
  const double m1 = std::abs(ev(order[0]));
  double ratio = 0.0;
  if (ev.size() > 1) {
    if (m1 == 0.0) throw Error(ErrorCode::DegenerateDominantEigenvalue, "zero spectrum");
    ratio = std::abs(ev(order[1])) / m1;
    if (ratio > 1.0 - gap_tol) {
      throw Error(ErrorCode::DegenerateDominantEigenvalue,
                  "|mu2|/|mu1| = " + std::to_string(ratio));
    }
  }
  CVec v = es.eigenvectors().col(order[0]);
  v.normalize();
  canonicalize_phase(v);
  return {ev(order[0]), v, ratio};
}

SVDResult svd(const CMat& m) {
  if (!all_finite(m)) throw Error(ErrorCode::NonFinite, "svd input");
  Eigen::JacobiSVD<CMat> s(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {s.matrixU(), s.singularValues(), s.matrixV()};
}

CMat polar_unitary(const CMat& m) {
  Eigen::JacobiSVD<CMat> s(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return s.matrixU() * s.matrixV().adjoint();
}

CMat expi_hermitian(const CMat& h, double t) {
  Eigen::SelfAdjointEigenSolver<CMat> es(h);
  CVec ph(h.rows());
  for (Eigen::Index k = 0; k < h.rows(); ++k) ph(k) = std::exp(cd(0.0, t * es.eigenvalues()(k)));
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

cd hs_pair(const CMat& y, const CMat& x) { return (y.adjoint() * x).trace(); }

CVec vec_rm(const CMat& x) {
  CVec v(x.size());
  for (Eigen::Index r = 0; r < x.rows(); ++r)
    for (Eigen::Index c = 0; c < x.cols(); ++c) v(r * x.cols() + c) = x(r, c);
  return v;
}

CMat unvec_rm(const CVec& v, Eigen::Index rows, Eigen::Index cols) {
  CMat x(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) x(r, c) = v(r * cols + c);
  return x;
}

namespace {
std::atomic<int> g_threads{1};
}

void set_num_threads(int n) { g_threads = std::max(1, n); }
int num_threads() { return g_threads; }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const int t = std::min<int>(g_threads, static_cast<int>(std::max<std::size_t>(n, 1)));
  if (t <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  for (int w = 0; w < t; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= n || failed) return;
        try {
          fn(i);
        } catch (...) {
          if (!failed.exchange(true)) err = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace numerics
}  // namespace hberry
