#include <gtest/gtest.h>

#include <random>

#include "hberry/mps.hpp"
#include "support.hpp"

using namespace hberry;
using namespace hberry::mps;

namespace {

std::vector<CMat> random_raw(int n, int D, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<CMat> out;
  for (int i = 0; i < n; ++i) {
    CMat a(D, D);
    for (int r = 0; r < D; ++r)
      for (int c = 0; c < D; ++c) a(r, c) = cd(g(rng), g(rng));
    out.push_back(a);
  }
  return out;
}

CMat random_unitary(int D, unsigned seed) {
  auto m = random_raw(1, D, seed)[0];
  Eigen::HouseholderQR<CMat> qr(m);
  return qr.householderQ() * CMat::Identity(D, D);
}

}  // namespace

TEST(MPS, RightCanonicalizeRandom) {
  for (unsigned seed = 1; seed <= 5; ++seed) {
    auto t = right_canonicalize(random_raw(3, 4, seed));
    EXPECT_LT(canonical_residual(t), 1e-10);
    EXPECT_NEAR(t.lambda.squaredNorm(), 1.0, 1e-12);
    for (int k = 1; k < t.D(); ++k) EXPECT_GE(t.lambda(k - 1), t.lambda(k));
    auto rep = injectivity_check(t);
    EXPECT_NEAR(std::abs(rep.mu - cd(1.0)), 0.0, 1e-10);
    EXPECT_LT(rep.gap_ratio, 1.0);
  }
}

TEST(MPS, CatStateIsNotInjective) {
  std::vector<CMat> raw(2, CMat::Zero(2, 2));
  raw[0](0, 0) = 1.0;
  raw[1](1, 1) = 1.0;
  try {
    right_canonicalize(raw);
    FAIL() << "cat state accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotInjective) << e.what();
  }
}

TEST(MPS, EdgeOverlapWithItselfAndGauge) {
  auto t = right_canonicalize(random_raw(2, 3, 11));
  auto self = edge_overlap(t, t);
  EXPECT_NEAR(std::abs(self.mu), 1.0, 1e-10);
  EXPECT_NEAR(self.X.norm(), 1.0, 1e-12);
  // Lambda is generically nondegenerate, so the allowed W is diagonal.
  CMat W = CMat::Zero(3, 3);
  for (int k = 0; k < 3; ++k) W(k, k) = std::polar(1.0, 0.7 * k + 0.2);
  auto g = apply_gauge(t, 0.4, W);
  EXPECT_LT(canonical_residual(g), 1e-10);
  auto ov = edge_overlap(t, g);
  EXPECT_NEAR(std::abs(ov.mu), 1.0, 1e-10);
  EXPECT_NEAR(std::arg(ov.mu * std::polar(1.0, 0.4)), 0.0, 1e-9);
}

TEST(MPS, GaugeRejectsNonCommutingW) {
  auto t = right_canonicalize(random_raw(2, 3, 12));
  EXPECT_THROW(apply_gauge(t, 0.0, random_unitary(3, 5)), Error);
}

TEST(MPS, MixedTransferDominantEigenvalue) {
  auto t = right_canonicalize(random_raw(2, 3, 13));
  auto ep = numerics::dominant_eigenpair(mixed_transfer(t, t));
  EXPECT_NEAR(std::abs(ep.value - cd(1.0)), 0.0, 1e-10);
}

TEST(MPS, DDKSOfDimerModel) {
  for (int two_s : {1, 2}) {
    auto fam = fixtures::model_family(1, two_s);
    auto q = ddks(fam, fam.mesh().fundamental_class());
    EXPECT_EQ(q.value, two_s);
    EXPECT_LT(q.residual, 1e-9);
    EXPECT_LT(q.max_abs_flux, kPi / 2);
  }
}

TEST(MPS, FluxInvariantUnderSiteGauge) {
  auto fam = fixtures::model_family(1, 1);
  auto F = flux3(fam);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  auto tensors = fam.tensors;
  for (auto& t : tensors) {
    CMat W = CMat::Zero(t.D(), t.D());
    if (t.D() == 2 && std::abs(t.lambda(0) - t.lambda(1)) < 1e-10) {
      W = random_unitary(2, static_cast<unsigned>(rng()));
    } else {
      for (int k = 0; k < t.D(); ++k) W(k, k) = std::polar(1.0, u(rng));
    }
    t = apply_gauge(t, u(rng), W);
  }
  auto g = build_family(fam.complex, tensors);
  EXPECT_LT((flux3(g) - F).max_abs(), 1e-9);
  EXPECT_EQ(ddks(g, g.mesh().fundamental_class()).value, 1);
}

TEST(MPS, ChernFromA01OnEquator) {
  auto fam = fixtures::model_family(1, 1);
  auto dom = gcomplex::standard_domains(fam.mesh());
  auto q = chern_from_A01(fam, dom.at("equator"));
  EXPECT_LT(q.residual, 1e-9);
}
