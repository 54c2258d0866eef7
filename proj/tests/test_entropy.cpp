#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "qloc/distribution.hpp"
#include "qloc/entropy.hpp"

using qloc::conjugate_order;
using qloc::ProbabilityDistribution;
using qloc::renyi_entropy;
using qloc::shannon_entropy;

namespace {

ProbabilityDistribution random_dist(std::mt19937_64& rng, int n) {
  std::vector<double> w(static_cast<std::size_t>(n));
  double s = 0.0;
  for (auto& x : w) {
    x = static_cast<double>(rng() >> 11) * 0x1p-53 + 1e-6;
    s += x;
  }
  for (auto& x : w) x /= s;
  return {0, std::move(w)};
}

}  // namespace

TEST_CASE("distribution constructor invariants") {
  CHECK_THROWS_AS(ProbabilityDistribution(0, {}), std::invalid_argument);
  CHECK_THROWS_AS(ProbabilityDistribution(0, {0.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(ProbabilityDistribution(0, {0.5, -1e-6}), std::invalid_argument);

  // Quadrature noise just below zero is clamped, not fatal.
  const ProbabilityDistribution d(-2, {0.5, -1e-13, 0.5});
  CHECK(d[-1] == 0.0);
  CHECK(d[-2] == 0.5);
  CHECK(d[0] == 0.5);
  CHECK(d[1] == 0.0);   // outside the stored range
  CHECK(d[-3] == 0.0);
  CHECK(d.first_bin() == -2);
  CHECK(d.last_bin() == 0);
  CHECK(d.normalized());
  CHECK(d.max_weight() == 0.5);
}

TEST_CASE("shannon entropy closed forms") {
  const ProbabilityDistribution uniform(0, std::vector<double>(8, 0.125));
  CHECK(shannon_entropy(uniform) == Catch::Approx(std::log(8.0)).epsilon(1e-14));

  const ProbabilityDistribution point(3, {1.0});
  CHECK(shannon_entropy(point) == 0.0);

  const ProbabilityDistribution biased(0, {0.25, 0.75});
  const double expected = 0.25 * std::log(4.0) + 0.75 * std::log(4.0 / 3.0);
  CHECK(shannon_entropy(biased) == Catch::Approx(expected).epsilon(1e-14));

  // Zero-weight bins contribute nothing.
  const ProbabilityDistribution padded(0, {0.25, 0.0, 0.75, 0.0});
  CHECK(shannon_entropy(padded) == Catch::Approx(expected).epsilon(1e-14));
}

TEST_CASE("renyi entropy closed forms and limits") {
  const ProbabilityDistribution half(0, {0.5, 0.5});
  CHECK(renyi_entropy(half, 2.0) == Catch::Approx(std::log(2.0)).epsilon(1e-14));

  const ProbabilityDistribution biased(0, {0.25, 0.75});
  // Order 2: -ln(1/16 + 9/16).
  CHECK(renyi_entropy(biased, 2.0) ==
        Catch::Approx(-std::log(0.625)).epsilon(1e-14));
  // Order 1/2: 2 ln(1/2 + sqrt(3)/2).
  CHECK(renyi_entropy(biased, 0.5) ==
        Catch::Approx(2.0 * std::log(0.5 + std::sqrt(3.0) / 2.0)).epsilon(1e-14));

  // Min-entropy at infinite order.
  CHECK(renyi_entropy(biased, std::numeric_limits<double>::infinity()) ==
        Catch::Approx(-std::log(0.75)).epsilon(1e-14));

  // Orders straddling 1 take the Shannon limit continuously.
  const double h1 = shannon_entropy(biased);
  CHECK(renyi_entropy(biased, 1.0) == h1);
  CHECK(renyi_entropy(biased, 1.0 + 1e-9) == h1);
  CHECK(renyi_entropy(biased, 1.0 + 1e-7) == Catch::Approx(h1).margin(1e-7));
  CHECK(renyi_entropy(biased, 1.0 - 1e-7) == Catch::Approx(h1).margin(1e-7));
}

TEST_CASE("renyi entropy is nonincreasing in the order") {
  std::mt19937_64 rng(7u);
  const double orders[] = {0.25, 0.5, 0.9, 1.0, 1.5, 2.0, 4.0, 16.0,
                           std::numeric_limits<double>::infinity()};
  for (int rep = 0; rep < 50; ++rep) {
    const auto d = random_dist(rng, 2 + static_cast<int>(rng() % 30));
    double prev = std::numeric_limits<double>::infinity();
    for (double a : orders) {
      const double h = renyi_entropy(d, a);
      CHECK(h <= prev + 1e-12);
      CHECK(h >= -1e-12);  // nonnegative for normalized input
      prev = h;
    }
  }
}

TEST_CASE("renyi entropy is additive over product distributions") {
  std::mt19937_64 rng(11u);
  const auto a = random_dist(rng, 6);
  const auto b = random_dist(rng, 9);
  std::vector<double> prod;
  for (double x : a.weights())
    for (double y : b.weights()) prod.push_back(x * y);
  const ProbabilityDistribution ab(0, std::move(prod));
  for (double order : {0.5, 1.0, 2.0, 3.5}) {
    CHECK(renyi_entropy(ab, order) ==
          Catch::Approx(renyi_entropy(a, order) + renyi_entropy(b, order))
              .epsilon(1e-12));
  }
}

TEST_CASE("renyi entropy rejects bad orders") {
  const ProbabilityDistribution d(0, {0.5, 0.5});
  CHECK_THROWS_AS(renyi_entropy(d, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(renyi_entropy(d, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(renyi_entropy(d, std::nan("")), std::invalid_argument);
}

TEST_CASE("conjugate orders satisfy 1/alpha + 1/beta = 2") {
  for (double a : {1.0, 1.5, 2.0, 3.0, 10.0, 1e6}) {
    const auto pair = conjugate_order(a);
    CHECK(1.0 / pair.alpha + 1.0 / pair.beta == Catch::Approx(2.0).epsilon(1e-12));
    CHECK(pair.beta <= 1.0);
    CHECK(pair.beta > 0.5);
  }
  CHECK(conjugate_order(1.0).beta == 1.0);
  CHECK(conjugate_order(2.0).beta == Catch::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(conjugate_order(std::numeric_limits<double>::infinity()).beta == 0.5);

  CHECK_THROWS_AS(conjugate_order(0.99), std::invalid_argument);
  CHECK_THROWS_AS(conjugate_order(0.5), std::invalid_argument);
  CHECK_THROWS_AS(conjugate_order(std::nan("")), std::invalid_argument);
}
