#include <doctest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <vector>

#include "kinex/errors.hpp"
#include "kinex/stats.hpp"
#include "oracles.hpp"

using namespace kinex;
using doctest::Approx;

TEST_CASE("histogram") {
  SUBCASE("single bin holding every sample") {
    const std::vector<double> s(10, 0.5);
    const std::vector<double> e{0.0, 1.0};
    const DensityEstimate d = histogram(s, e);
    CHECK(d.density == std::vector<double>{1.0});
  }
  SUBCASE("uniform samples give flat density") {
    const auto s = oracle::uniform(100000, 1);
    const DensityEstimate d = histogram(s, linear_edges(0, 1, 10));
    for (double v : d.density) CHECK(std::abs(v - 1.0) < 0.05);
    CHECK(d.integral() == Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("log bins match exponential CDF differences") {
    const auto s = oracle::exponential(100000, 1.0, 2);
    const auto edges = log_edges(0.01, 10.0, 1.25);
    const DensityEstimate d = histogram(s, edges, BinScale::Logarithmic);
    CHECK(std::abs(d.integral() - 1.0) < 1e-9);
    const double covered = exponential_cdf(edges.back()) - exponential_cdf(edges.front());
    double worst = 0.0;
    for (std::size_t k = 0; k < d.bins(); ++k) {
      const double expected_mass = (exponential_cdf(edges[k + 1]) - exponential_cdf(edges[k])) / covered;
      worst = std::max(worst, std::abs(d.density[k] * d.width(k) - expected_mass));
      // bin-averaged density, away from the sparse smallest bins
      if (edges[k] > 0.1) {
        CHECK(std::abs(d.density[k] - expected_mass / d.width(k)) < 0.05);
      }
    }
    CHECK(worst < 0.05);
    CHECK(d.n_out_of_range > 0);
    CHECK(d.center(3) == Approx(std::sqrt(edges[3] * edges[4])));
  }
  SUBCASE("out-of-range samples are counted but not normalized") {
    const std::vector<double> s{-1.0, 0.25, 0.75, 2.0, 1.0};
    const DensityEstimate d = histogram(s, linear_edges(0, 1, 2));
    CHECK(d.n_samples == 3);
    CHECK(d.n_out_of_range == 2);
    CHECK(d.density[0] == Approx(2.0 / 3.0));
    CHECK(d.density[1] == Approx(4.0 / 3.0));
  }
  SUBCASE("errors") {
    const std::vector<double> s{5.0};
    CHECK_THROWS_AS(histogram(s, linear_edges(0, 1, 4)), EstimationError);
    const std::vector<double> bad{0.0, 0.5, 0.5};
    CHECK_THROWS_AS(histogram(s, bad), DomainError);
    CHECK_THROWS_AS(histogram(s, linear_edges(0, 1, 4), BinScale::Logarithmic), DomainError);
  }
}

TEST_CASE("log_edges grow by a constant ratio and cover the range") {
  const auto e = log_edges(1e-3, 100.0, 1.25);
  CHECK(e.front() == 1e-3);
  CHECK(e.back() >= 100.0);
  CHECK(e[e.size() - 2] < 100.0);
  for (std::size_t k = 1; k < e.size(); ++k) CHECK(e[k] / e[k - 1] == Approx(1.25));
}

TEST_CASE("averaged densities still integrate to one") {
  std::vector<DensityEstimate> parts;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    parts.push_back(histogram(oracle::exponential(2000, 1.0, seed), linear_edges(0, 4, 40)));
  }
  const DensityEstimate avg = average_densities(parts);
  CHECK(std::abs(avg.integral() - 1.0) < 1e-9);
  CHECK(average_densities(std::span(parts).first(1)) == parts[0]);
  parts.push_back(histogram(oracle::exponential(100, 1.0, 9), linear_edges(0, 5, 40)));
  CHECK_THROWS_AS(average_densities(parts), DomainError);
}

TEST_CASE("Hill tail estimator") {
  SUBCASE("Pareto with density exponent 2") {
    const auto s = oracle::pareto(100000, 1.0, 1.0, 3);
    const TailFit fit = estimate_tail_exponent(s, 0.05);
    CHECK(std::abs(fit.density_exponent - 2.0) < 0.1);
    CHECK(fit.n_tail == 5000);
    CHECK(fit.standard_error == Approx(fit.cdf_index() / std::sqrt(5000.0)));
  }
  SUBCASE("Pareto with density exponent 3") {
    const auto s = oracle::pareto(100000, 2.0, 0.5, 4);
    CHECK(std::abs(estimate_tail_exponent(s, 0.05).density_exponent - 3.0) < 0.15);
  }
  SUBCASE("scale invariance") {
    auto s = oracle::pareto(20000, 1.5, 1.0, 5);
    const double base = estimate_tail_exponent(s).density_exponent;
    for (double k : {1e-3, 0.5, 7.0, 1e4}) {
      std::vector<double> scaled = s;
      for (double& x : scaled) x *= k;
      CHECK(std::abs(estimate_tail_exponent(scaled).density_exponent - base) < 1e-12);
    }
  }
  SUBCASE("degenerate inputs") {
    std::vector<double> two_point(1000, 1.0);
    for (std::size_t i = 0; i < 500; ++i) two_point[i] = 2.0;
    CHECK_THROWS_AS(estimate_tail_exponent(two_point, 0.05), EstimationError);
    CHECK_THROWS_AS(estimate_tail_exponent(oracle::uniform(150, 1), 0.05), EstimationError);
    CHECK_THROWS_AS(estimate_tail_exponent(oracle::uniform(50, 1), 0.5), EstimationError);
    std::vector<double> with_zeros(1000, 0.0);
    with_zeros[0] = 1.0;
    CHECK_THROWS_AS(estimate_tail_exponent(with_zeros, 0.5), EstimationError);
  }
}

TEST_CASE("beta_pdf") {
  CHECK(beta_pdf(0.5, 1, 1) == Approx(1.0));
  CHECK(beta_pdf(0.5, 2, 2) == Approx(1.5));
  CHECK(beta_pdf(0.25, 4, 2) == Approx(0.234375));
  CHECK_THROWS_AS(beta_pdf(0.0, 1, 1), DomainError);
  CHECK_THROWS_AS(beta_pdf(1.0, 1, 1), DomainError);

  SUBCASE("integrates to one under adaptive quadrature") {
    boost::math::quadrature::tanh_sinh<double> integrator;
    for (double a : {0.5, 1.0, 2.0, 4.0, 8.0}) {
      for (double b : {0.5, 1.0, 2.0, 4.0, 8.0}) {
        const double total = integrator.integrate([&](double x) { return beta_pdf(x, a, b); }, 0.0, 1.0);
        CHECK(std::abs(total - 1.0) < 1e-6);
        // The CDF is the running integral of the density.
        const double half = integrator.integrate([&](double x) { return beta_pdf(x, a, b); }, 0.0, 0.3);
        CHECK(std::abs(half - beta_cdf(0.3, a, b)) < 1e-6);
      }
    }
  }
}

TEST_CASE("ks_statistic") {
  SUBCASE("reference quantiles give at most 0.5/n") {
    const std::size_t n = 1000;
    std::vector<double> s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = -std::log1p(-(i + 0.5) / n);
    CHECK(ks_statistic(s, [](double x) { return exponential_cdf(x); }) <= 0.5 / n + 1e-12);
  }
  SUBCASE("all zeros against uniform is 1") {
    const std::vector<double> zeros(50, 0.0);
    CHECK(ks_statistic(zeros, [](double x) { return std::clamp(x, 0.0, 1.0); }) == 1.0);
  }
  SUBCASE("uniform samples against the uniform CDF") {
    const auto s = oracle::uniform(10000, 8);
    CHECK(ks_statistic(s, [](double x) { return std::clamp(x, 0.0, 1.0); }) < 0.02);
  }
  SUBCASE("invariant under a monotone transform") {
    const auto s = oracle::exponential(3000, 1.0, 9);
    const double d = ks_statistic(s, [](double x) { return exponential_cdf(x); });
    std::vector<double> logs;
    for (double x : s) logs.push_back(std::log(x));
    const double dl = ks_statistic(logs, [](double y) { return exponential_cdf(std::exp(y)); });
    CHECK(d == Approx(dl).epsilon(1e-12));
    CHECK(d >= 0.0);
    CHECK(d <= 1.0);
  }
}

TEST_CASE("two-sample KS and stationarity") {
  const auto a = oracle::exponential(10000, 1.0, 10);
  const auto b = oracle::exponential(10000, 1.0, 11);
  CHECK(stationarity_check(a, a, 1e-9));
  CHECK(stationarity_check(a, b, 0.05));
  auto u = oracle::uniform(1000, 12);
  auto shifted = u;
  for (double& x : shifted) x += 1.0;
  CHECK(ks_two_sample(u, shifted) == 1.0);
  CHECK_FALSE(stationarity_check(u, shifted, 0.5));
  // ties are handled as jumps of the empirical CDF
  const std::vector<double> x{1, 1, 2, 2};
  const std::vector<double> y{1, 2, 2, 2};
  CHECK(ks_two_sample(x, y) == Approx(0.25));
}

TEST_CASE("gamma_moment_fit") {
  CHECK(std::abs(gamma_moment_fit(oracle::exponential(100000, 1.0, 13)).shape - 1.0) < 0.05);
  const GammaFit g = gamma_moment_fit(oracle::gamma_integer_shape(100000, 4, 0.25, 14));
  CHECK(std::abs(g.shape - 4.0) < 0.2);
  CHECK(g.scale == Approx(0.25).epsilon(0.05));
  CHECK_THROWS_AS(gamma_moment_fit(std::vector<double>(10, 2.0)), EstimationError);

  SUBCASE("recovers shape and scale within 5% across shapes") {
    for (int shape : {1, 2, 4, 8, 16}) {
      const GammaFit fit = gamma_moment_fit(oracle::gamma_integer_shape(100000, shape, 1.5, 20 + shape));
      CHECK(fit.shape == Approx(shape).epsilon(0.05));
      CHECK(fit.scale == Approx(1.5).epsilon(0.05));
    }
    // shape 0.5: square of a standard normal, scaled, via the chi-square identity
    std::vector<double> half = oracle::uniform(100000, 40);
    std::vector<double> other = oracle::uniform(100000, 41);
    for (std::size_t i = 0; i < half.size(); ++i) {
      const double z = std::sqrt(-2.0 * std::log1p(-half[i])) * std::cos(2.0 * M_PI * other[i]);
      half[i] = z * z;  // gamma(0.5, scale 2)
    }
    const GammaFit fit = gamma_moment_fit(half);
    CHECK(fit.shape == Approx(0.5).epsilon(0.05));
    CHECK(fit.scale == Approx(2.0).epsilon(0.05));
  }
}

namespace {

DensityEstimate from_values(std::vector<double> values) {
  DensityEstimate d;
  d.edges = linear_edges(0.0, 1.0, values.size());
  d.density = std::move(values);
  return d;
}

}  // namespace

TEST_CASE("count_modes") {
  std::vector<double> triangle;
  for (int k = 0; k < 41; ++k) triangle.push_back(20.0 - std::abs(k - 20));
  CHECK(count_modes(from_values(triangle)) == 1);

  std::vector<double> two;
  for (int k = 0; k < 60; ++k) {
    two.push_back(std::exp(-0.5 * std::pow((k - 15) / 4.0, 2)) + std::exp(-0.5 * std::pow((k - 45) / 4.0, 2)));
  }
  CHECK(count_modes(from_values(two)) == 2);

  SUBCASE("mode at the left edge counts") {
    std::vector<double> decay;
    for (int k = 0; k < 30; ++k) decay.push_back(std::exp(-0.2 * k));
    CHECK(count_modes(from_values(decay)) == 1);
  }
  SUBCASE("shallow ripples are not modes") {
    std::vector<double> ripple;
    for (int k = 0; k < 60; ++k) ripple.push_back(2.0 + 0.05 * std::sin(k * 0.9) - std::abs(k - 30) * 0.01);
    CHECK(count_modes(from_values(ripple), 1) == 1);
  }
  SUBCASE("isolated blips far below the main peak are noise") {
    std::vector<double> tail(60, 0.0);
    for (int k = 0; k < 30; ++k) tail[k] = 1.0 - std::abs(k - 10) * 0.03;
    tail[50] = 0.002;
    tail[55] = 0.004;
    CHECK(count_modes(from_values(tail), 1) == 1);
    CHECK(count_modes(from_values(tail), 1, 1.2, 0.0) == 3);
  }
  SUBCASE("needs enough bins") {
    CHECK_THROWS_AS(count_modes(from_values({1, 2, 1}), 5), DomainError);
  }
}
