#include <cmath>
#include <numbers>

#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <gtest/gtest.h>

#include "vanetconn/numerics.hpp"

namespace vanetconn {
namespace {

TEST(Quadrature, ExponentialMoments) {
  const auto r0 = integrate_semi_infinite([](double x) { return std::exp(-x); }, 1.0);
  EXPECT_NEAR(r0.value, 1.0, 1e-10);
  const auto r1 = integrate_semi_infinite([](double x) { return x * std::exp(-x); }, 1.0);
  EXPECT_NEAR(r1.value, 1.0, 1e-10);
  EXPECT_LE(r1.error, 1e-10);
}

TEST(Quadrature, GaussianTimesExponentialMatchesErfc) {
  const double a = 0.019;
  const double b = 1.0 / (251.2 * 251.2);
  const auto r = integrate_semi_infinite([&](double x) { return std::exp(-a * x - b * x * x); }, a);
  const double closed =
      std::sqrt(std::numbers::pi / (4.0 * b)) * std::exp(a * a / (4.0 * b)) * std::erfc(a / (2.0 * std::sqrt(b)));
  EXPECT_NEAR(r.value, closed, 1e-9 * closed);
  EXPECT_NEAR(r.value, 48.884325022535583, 1e-8);  // 40-digit quadrature reference
}

TEST(Quadrature, FiniteIntervalPolynomial) {
  const auto r = integrate([](double x) { return 3.0 * x * x; }, 0.0, 2.0);
  EXPECT_NEAR(r.value, 8.0, 1e-13);
  EXPECT_EQ(integrate([](double) { return 1.0; }, 1.0, 1.0).value, 0.0);
  EXPECT_THROW(integrate([](double) { return 1.0; }, 2.0, 1.0), std::invalid_argument);
}

TEST(Quadrature, FailsLoudlyInsteadOfTruncating) {
  QuadratureSpec tight;
  tight.max_subdivisions = 3;
  // 1/sqrt(x) has an integrable singularity that needs many bisections.
  EXPECT_THROW(integrate([](double x) { return x > 0.0 ? 1.0 / std::sqrt(x) : 0.0; }, 0.0, 1.0, tight),
               NumericalError);
  EXPECT_THROW(integrate_semi_infinite([](double x) { return std::exp(-x); }, 0.0), std::invalid_argument);
}

TEST(UpperIncompleteGamma, ShapeOneIsExponential) {
  for (double x : {0.0, 0.1, 1.0, 2.5, 10.0, 40.0})
    EXPECT_NEAR(upper_incomplete_gamma(1.0, x), std::exp(-x), 1e-14 * std::max(1.0, std::exp(-x)));
}

TEST(UpperIncompleteGamma, AtZeroIsCompleteGamma) {
  EXPECT_NEAR(upper_incomplete_gamma(3.0, 0.0), 2.0, 1e-14);
  EXPECT_NEAR(upper_incomplete_gamma(0.5, 0.0), std::sqrt(std::numbers::pi), 1e-14);
}

TEST(UpperIncompleteGamma, HalfOrderIsErfc) {
  EXPECT_NEAR(upper_incomplete_gamma(0.5, 1.0), 0.27880558528066197650, 1e-15);
  for (double z : {0.1, 0.7, 1.5, 3.0, 6.0}) {
    const double expected = std::sqrt(std::numbers::pi) * std::erfc(z);
    EXPECT_NEAR(upper_incomplete_gamma(0.5, z * z), expected, 1e-12 * expected) << "z = " << z;
  }
}

TEST(UpperIncompleteGamma, AgreesWithBoostAcrossRegimes) {
  for (double s : {0.5, 1.0, 1.5, 2.0, 3.5, 5.0, 10.0, 25.0}) {
    for (double x : {0.01, 0.5, 1.0, 3.0, 5.5, 10.0, 30.0, 60.0}) {
      const double expected = boost::math::tgamma(s, x);
      EXPECT_NEAR(upper_incomplete_gamma(s, x), expected, 1e-12 * expected) << "s=" << s << " x=" << x;
    }
  }
}

TEST(UpperIncompleteGamma, Recurrence) {
  for (double s = 0.5; s <= 10.0; s += 0.5) {
    for (double x : {0.1, 1.0, 10.0}) {
      const double lhs = upper_incomplete_gamma(s + 1.0, x);
      const double rhs = s * upper_incomplete_gamma(s, x) + std::pow(x, s) * std::exp(-x);
      EXPECT_NEAR(lhs, rhs, 1e-10 * std::abs(lhs)) << "s=" << s << " x=" << x;
    }
  }
}

TEST(UpperIncompleteGamma, ExtendedPrecision) {
  using Wide = boost::multiprecision::cpp_bin_float_50;
  const Wide got = upper_incomplete_gamma(Wide(0.5), Wide(1));
  const Wide expected = sqrt(boost::math::constants::pi<Wide>()) * boost::math::erfc(Wide(1));
  EXPECT_LT(abs(got - expected), Wide("1e-45"));
  const Wide cf = upper_incomplete_gamma(Wide(4.5), Wide(30));
  EXPECT_LT(abs(cf / boost::math::tgamma(Wide(4.5), Wide(30)) - 1), Wide("1e-45"));
}

TEST(UpperIncompleteGamma, DomainErrors) {
  EXPECT_THROW(upper_incomplete_gamma(0.0, 1.0), std::domain_error);
  EXPECT_THROW(upper_incomplete_gamma(-1.0, 1.0), std::domain_error);
  EXPECT_THROW(upper_incomplete_gamma(1.0, -0.1), std::domain_error);
}

TEST(LogFactorial, SmallValuesExact) {
  EXPECT_EQ(log_factorial(0), 0.0);
  EXPECT_EQ(log_factorial(1), 0.0);
  EXPECT_DOUBLE_EQ(log_factorial(5), std::log(120.0));
  double f = 1.0;
  for (int n = 1; n <= 20; ++n) {
    f *= n;
    EXPECT_NEAR(log_factorial(n), std::log(f), 1e-14 * std::log(f) + 1e-15);
  }
  EXPECT_THROW(log_factorial(-1), std::domain_error);
}

TEST(LogFactorial, LargeArgumentsStayFinite) {
  double summed = 0.0;
  for (int k = 2; k <= 170; ++k) summed += std::log(static_cast<double>(k));
  EXPECT_NEAR(log_factorial(170), summed, 1e-12 * summed);
  EXPECT_TRUE(std::isfinite(log_factorial(100'000)));
}

}  // namespace
}  // namespace vanetconn
