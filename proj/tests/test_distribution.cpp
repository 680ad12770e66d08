#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "secbc/distribution.hpp"
#include "secbc/errors.hpp"

using namespace secbc;

namespace {

// brute-force marginal over explicit outcome loops, independent of the
// stride machinery in the implementation
double brute_sum(const std::vector<double>& mass, int ca, int cb, int cc, int fix_a,
                 int fix_b) {
  double s = 0.0;
  for (int a = 0; a < ca; ++a)
    for (int b = 0; b < cb; ++b)
      for (int c = 0; c < cc; ++c)
        if ((fix_a < 0 || a == fix_a) && (fix_b < 0 || b == fix_b))
          s += mass[(a * cb + b) * cc + c];
  return s;
}

std::vector<double> random_mass(std::mt19937& gen, std::size_t size) {
  std::uniform_real_distribution<double> u(0.01, 1.0);
  std::vector<double> m(size);
  double total = 0.0;
  for (double& v : m) {
    v = u(gen);
    total += v;
  }
  for (double& v : m) v /= total;
  return m;
}

}  // namespace

TEST_CASE("entropy basics") {
  Distribution uniform4 = Distribution::uniform({"A"}, {4});
  CHECK(entropy(uniform4) == doctest::Approx(2.0).epsilon(1e-12));

  Distribution point({"A"}, {3}, {0.0, 1.0, 0.0});
  CHECK(entropy(point) == 0.0);

  // -0.9 log2 0.9 - 0.1 log2 0.1, frozen from an independent evaluation
  Distribution skewed({"A"}, {2}, {0.9, 0.1});
  CHECK(entropy(skewed) == doctest::Approx(0.4689955935892812).epsilon(1e-12));
}

TEST_CASE("entropy of uniform over m is log2 m") {
  for (int m = 1; m <= 9; ++m) {
    Distribution d = Distribution::uniform({"A"}, {m});
    CHECK(std::abs(entropy(d) - std::log2(static_cast<double>(m))) < 1e-12);
  }
}

TEST_CASE("invalid distributions are rejected") {
  CHECK_THROWS_AS(Distribution({"A"}, {2}, {-0.1, 1.1}), ValidationError);
  CHECK_THROWS_AS(Distribution({"A"}, {2}, {0.4, 0.4}), ValidationError);
  CHECK_THROWS_AS(Distribution({"A"}, {2}, {0.5, 0.25, 0.25}), ValidationError);
  CHECK_THROWS_AS(Distribution({"A", "A"}, {2, 2}, {0.25, 0.25, 0.25, 0.25}),
                  ValidationError);
}

TEST_CASE("marginal of an independent product recovers the factor") {
  // p(a) = (0.3, 0.7), p(b) = (0.2, 0.5, 0.3)
  std::vector<double> pa = {0.3, 0.7};
  std::vector<double> pb = {0.2, 0.5, 0.3};
  std::vector<double> mass;
  for (double a : pa)
    for (double b : pb) mass.push_back(a * b);
  Distribution d({"A", "B"}, {2, 3}, mass);

  Distribution ma = marginal(d, {"A"});
  CHECK(ma.mass()[0] == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(ma.mass()[1] == doctest::Approx(0.7).epsilon(1e-12));

  Distribution all = marginal(d, {"A", "B"});
  REQUIRE(all.mass().size() == d.mass().size());
  for (std::size_t i = 0; i < d.mass().size(); ++i)
    CHECK(all.mass()[i] == d.mass()[i]);

  CHECK_THROWS_AS(marginal(d, {"C"}), ValidationError);
}

TEST_CASE("marginal matches brute-force summation on a random 3-variable table") {
  std::mt19937 gen(1234);
  const int ca = 3, cb = 2, cc = 4;
  std::vector<double> mass = random_mass(gen, ca * cb * cc);
  Distribution d({"A", "B", "C"}, {ca, cb, cc}, mass);

  Distribution mab = marginal(d, {"A", "B"});
  for (int a = 0; a < ca; ++a)
    for (int b = 0; b < cb; ++b) {
      std::vector<int> idx = {a, b};
      CHECK(mab.at(idx) ==
            doctest::Approx(brute_sum(mass, ca, cb, cc, a, b)).epsilon(1e-12));
    }

  double total = 0.0;
  for (double v : mab.mass()) total += v;
  CHECK(std::abs(total - 1.0) < 1e-12);
}

TEST_CASE("mutual information basics") {
  // independent pair
  Distribution indep({"A", "B"}, {2, 2}, {0.15, 0.35, 0.15, 0.35});
  CHECK(mutual_information(indep, "A", "B") == doctest::Approx(0.0).epsilon(1e-12));

  // B = A, uniform over 4
  std::vector<double> copy(16, 0.0);
  for (int i = 0; i < 4; ++i) copy[i * 4 + i] = 0.25;
  Distribution ident({"A", "B"}, {4, 4}, copy);
  CHECK(mutual_information(ident, "A", "B") == doctest::Approx(2.0).epsilon(1e-12));

  // uniform input through a crossover-0.1 binary symmetric kernel
  Distribution bsc({"A", "B"}, {2, 2}, {0.45, 0.05, 0.05, 0.45});
  CHECK(mutual_information(bsc, "A", "B") ==
        doctest::Approx(0.5310044064107188).epsilon(1e-12));

  CHECK_THROWS_AS(mutual_information(bsc, "A", "A"), ValidationError);
  CHECK_THROWS_AS(mutual_information(bsc, "A", "X"), ValidationError);
}

TEST_CASE("conditional mutual information") {
  std::mt19937 gen(99);

  SUBCASE("independent conditioner leaves MI unchanged") {
    std::vector<double> ab = random_mass(gen, 4);
    std::vector<double> mass;
    for (double p : ab) {
      mass.push_back(p * 0.6);
      mass.push_back(p * 0.4);
    }
    // layout (A,B,C) with C fastest: p(a,b,c) = p(a,b) p(c)
    Distribution d({"A", "B", "C"}, {2, 2, 2}, mass);
    CHECK(conditional_mutual_information(d, "A", "B", {"C"}) ==
          doctest::Approx(mutual_information(d, "A", "B")).epsilon(1e-9));
  }

  SUBCASE("conditioning on a copy of B removes all information") {
    std::vector<double> mass(8, 0.0);
    std::vector<double> ab = {0.1, 0.2, 0.3, 0.4};
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) mass[(a * 2 + b) * 2 + b] = ab[a * 2 + b];
    Distribution d({"A", "B", "C"}, {2, 2, 2}, mass);
    CHECK(conditional_mutual_information(d, "A", "B", {"C"}) ==
          doctest::Approx(0.0).epsilon(1e-12));
  }

  SUBCASE("overlapping sets are rejected") {
    Distribution d = Distribution::uniform({"A", "B", "C"}, {2, 2, 2});
    CHECK_THROWS_AS(conditional_mutual_information(d, "A", "B", {"A"}),
                    ValidationError);
  }
}

TEST_CASE("chain rule I(A;B,C) = I(A;C) + I(A;B|C) on random tables") {
  std::mt19937 gen(2024);
  for (int rep = 0; rep < 25; ++rep) {
    const int ca = 2 + rep % 2, cb = 2, cc = 3;
    Distribution d({"A", "B", "C"}, {ca, cb, cc}, random_mass(gen, ca * cb * cc));
    const double iabc =
        joint_entropy(d, {"A"}) + joint_entropy(d, {"B", "C"}) - entropy(d);
    const double rhs = mutual_information(d, "A", "C") +
                       conditional_mutual_information(d, "A", "B", {"C"});
    CHECK(std::abs(iabc - rhs) < 1e-9);
  }
}

TEST_CASE("information measures are nonnegative on random tables") {
  std::mt19937 gen(555);
  for (int rep = 0; rep < 25; ++rep) {
    Distribution d({"A", "B", "C"}, {2, 3, 2}, random_mass(gen, 12));
    CHECK(entropy(d) >= 0.0);
    CHECK(mutual_information(d, "A", "B") >= 0.0);
    CHECK(conditional_mutual_information(d, "A", "B", {"C"}) >= 0.0);
  }
}
