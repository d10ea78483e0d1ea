#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "mcsv/checks.hpp"
#include "mcsv/error.hpp"
#include "mcsv/spectral.hpp"

using namespace mcsv;

namespace {

constexpr double kPi = std::numbers::pi;

template <class Fn>
ErrorKind kind_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no mcsv::Error thrown";
  return ErrorKind::Io;
}

}  // namespace

TEST(Grid, RejectsOddOrTinyResolution) {
  EXPECT_EQ(kind_of([] { make_grid(63); }), ErrorKind::InvalidResolution);
  EXPECT_EQ(kind_of([] { make_grid(6); }), ErrorKind::InvalidResolution);
  EXPECT_EQ(kind_of([] { make_grid(0); }), ErrorKind::InvalidResolution);
  EXPECT_NO_THROW(make_grid(8));
}

TEST(Grid, CellCentredNodes) {
  auto g = make_grid(16);
  EXPECT_DOUBLE_EQ(g->spacing(), 1.0 / 16);
  const Point p = g->node(0, 0);
  EXPECT_DOUBLE_EQ(p.x1, 0.5 / 16);
  EXPECT_DOUBLE_EQ(p.x2, 0.5 / 16);
  const Point q = g->node(g->index(3, 5));
  EXPECT_DOUBLE_EQ(q.x1, 3.5 / 16);
  EXPECT_DOUBLE_EQ(q.x2, 5.5 / 16);
}

TEST(Grid, PeriodicDeltaUsesMinimumImage) {
  const Point d = periodic_delta({0.95, 0.05}, {0.05, 0.95});
  EXPECT_NEAR(d.x1, -0.1, 1e-15);
  EXPECT_NEAR(d.x2, 0.1, 1e-15);
  EXPECT_NEAR(periodic_distance({0.0, 0.0}, {1.0, 1.0}), 0.0, 1e-15);
}

TEST(Spectral, FftRoundTrip) {
  auto g = make_grid(32);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  RealField u(g);
  for (auto& v : u.values()) v = nd(rng);
  const auto back = g->inverse(g->forward(u.values()));
  for (std::size_t i = 0; i < u.size(); ++i) EXPECT_NEAR(back[i], u[i], 1e-13);
}

TEST(Spectral, LaplacianOfTrigPolynomialIsExact) {
  auto g = make_grid(32);
  const auto u = RealField::sample(g, [](Point p) {
    return std::sin(2 * kPi * 3 * p.x1) * std::cos(2 * kPi * 2 * p.x2);
  });
  const RealField lap = laplacian(u);
  const double c = -4 * kPi * kPi * 13;
  for (std::size_t i = 0; i < u.size(); ++i) EXPECT_NEAR(lap[i], c * u[i], 1e-9);
  const RealField bl = bilaplacian(u);
  for (std::size_t i = 0; i < u.size(); ++i) EXPECT_NEAR(bl[i], c * c * u[i], 1e-5);
}

TEST(Spectral, GradientOfTrigPolynomialIsExact) {
  auto g = make_grid(32);
  const auto u = RealField::sample(g, [](Point p) {
    return std::sin(2 * kPi * (p.x1 + 2 * p.x2));
  });
  const Gradient gr = gradient(u);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const Point p = g->node(i);
    const double c = std::cos(2 * kPi * (p.x1 + 2 * p.x2));
    EXPECT_NEAR(gr.d1[i], 2 * kPi * c, 1e-11);
    EXPECT_NEAR(gr.d2[i], 4 * kPi * c, 1e-11);
  }
}

TEST(Spectral, NyquistModeDroppedByDerivativeKeptByLaplacian) {
  auto g = make_grid(16);
  const auto u = RealField::sample(g, [](Point p) { return std::cos(2 * kPi * 8 * p.x1); });
  EXPECT_LT(linf_norm(gradient(u).d1), 1e-12);
  EXPECT_NEAR(linf_norm(laplacian(u)), 4 * kPi * kPi * 64 * linf_norm(u), 1e-8);
}

TEST(Spectral, DivergenceIsNegativeAdjointOfGradient) {
  auto g = make_grid(32);
  std::mt19937_64 rng(5);
  const RealField u = random_bandlimited(g, rng, 10);
  const RealField a = random_bandlimited(g, rng, 10);
  const RealField b = random_bandlimited(g, rng, 10);
  const Gradient gu = gradient(u);
  const double lhs = inner(gu.d1, a) + inner(gu.d2, b);
  const double rhs = -inner(u, divergence(a, b));
  EXPECT_NEAR(lhs, rhs, 1e-12 * std::max(1.0, std::abs(lhs)));
}

TEST(Spectral, InversesUndoTheirOperators) {
  auto g = make_grid(32);
  std::mt19937_64 rng(7);
  const RealField h = random_bandlimited(g, rng, 8);

  const double eps = 0.1;
  const RealField w = helmholtz_inverse(h, eps);
  const RealField back = -(eps * eps) * laplacian(w) + w;
  EXPECT_LT(linf_norm(back - h), 1e-12);

  const RealField p = poisson_inverse_meanzero(h);
  EXPECT_NEAR(mean(p), 0.0, 1e-15);
  EXPECT_LT(linf_norm(-laplacian(p) - (h - mean(h))), 1e-11);

  const RealField z = precond_inverse(h, 0.05, 1.0);
  EXPECT_LT(linf_norm(precond_apply(z, 0.05, 1.0) - h), 1e-11);
  const RealField z0 = precond_inverse(h, 0.0, 2.0);
  EXPECT_LT(linf_norm(precond_apply(z0, 0.0, 2.0) - h), 1e-12);
}

TEST(Spectral, InverseParameterValidation) {
  auto g = make_grid(8);
  RealField h(g, 1.0);
  EXPECT_EQ(kind_of([&] { helmholtz_inverse(h, 0.0); }), ErrorKind::Parameter);
  EXPECT_EQ(kind_of([&] { helmholtz_inverse(h, -1.0); }), ErrorKind::Parameter);
  EXPECT_EQ(kind_of([&] { precond_inverse(h, 0.1, 0.0); }), ErrorKind::Parameter);
  EXPECT_EQ(kind_of([&] { lq_norm(h, 0.5); }), ErrorKind::Parameter);
}

TEST(Spectral, HelmholtzOfConstantIsIdentity) {
  auto g = make_grid(8);
  const RealField h(g, 2.5);
  EXPECT_LT(linf_norm(helmholtz_inverse(h, 0.3) - h), 1e-14);
}

TEST(Spectral, QuadratureAndNorms) {
  auto g = make_grid(16);
  const RealField one(g, 1.0);
  EXPECT_NEAR(integrate(one), 1.0, 1e-15);
  EXPECT_NEAR(lq_norm(one, 1.0), 1.0, 1e-15);
  EXPECT_NEAR(l2_norm(one), 1.0, 1e-15);
  const auto u = RealField::sample(g, [](Point p) { return std::sin(2 * kPi * p.x1); });
  EXPECT_NEAR(l2_norm(u), std::sqrt(0.5), 1e-14);
  EXPECT_NEAR(mean(u), 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(lq_norm(u, std::numeric_limits<double>::infinity()), linf_norm(u));
}

TEST(Field, ArithmeticAndGridChecks) {
  auto g = make_grid(8);
  auto g2 = make_grid(16);
  RealField a(g, 1.0), b(g, 2.0), c(g2, 1.0);
  EXPECT_DOUBLE_EQ((a + b)[0], 3.0);
  EXPECT_DOUBLE_EQ((3.0 - b)[5], 1.0);
  EXPECT_DOUBLE_EQ(pointwise_min(a, b)[2], 1.0);
  EXPECT_EQ(kind_of([&] { a += c; }), ErrorKind::GridMismatch);
  EXPECT_EQ(kind_of([&] { RealField(g, std::vector<double>(3)); }), ErrorKind::GridMismatch);
  RealField bad(g, 0.0);
  bad[4] = std::nan("");
  EXPECT_FALSE(bad.all_finite());
  EXPECT_EQ(kind_of([&] { require_finite(bad, "bad"); }), ErrorKind::NonFinite);
}

TEST(Checks, RandomBandlimitedHasUnitSupAndNoHighModes) {
  auto g = make_grid(32);
  std::mt19937_64 rng(9);
  const RealField u = random_bandlimited(g, rng, 4);
  EXPECT_NEAR(linf_norm(u), 1.0, 1e-14);
  const Spectrum s = g->forward(u.values());
  for (std::size_t row = 0; row < static_cast<std::size_t>(g->n()); ++row) {
    for (std::size_t col = 0; col < static_cast<std::size_t>(g->n() / 2 + 1); ++col) {
      if (std::abs(g->freq_x2(row)) > 4 || g->freq_x1(col) > 4) {
        EXPECT_LT(std::abs(s[row * (g->n() / 2 + 1) + col]), 1e-10);
      }
    }
  }
}

TEST(Checks, GreenOperatorContractionAndApproximation) {
  auto g = make_grid(32);
  std::mt19937_64 rng(11);
  const auto lines = green_operator_checks(g, rng, 10, {1.0, 0.1, 0.01}, 8);
  ASSERT_FALSE(lines.empty());
  for (const auto& l : lines) EXPECT_TRUE(l.pass) << l.name << " = " << l.value;
}
