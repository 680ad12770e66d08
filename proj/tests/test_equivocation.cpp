#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <map>
#include <vector>

#include "secbc/equivocation.hpp"
#include "secbc/errors.hpp"
#include "test_util.hpp"

using namespace secbc;
using namespace secbc::testutil;

namespace {

ChainDistribution uniform_input(int card) {
  return ChainDistribution(
      1, {DiscreteChannel::constant_row(1, std::vector<double>(card, 1.0 / card))});
}

RateTuple rt(std::vector<double> v) { return RateTuple{std::move(v)}; }
RandomizationRates rr(std::vector<double> v, double tau = 0.0) {
  return RandomizationRates{std::move(v), tau};
}

std::vector<std::vector<long long>> all_paths(const CodeParams& params) {
  const int k = params.layers();
  std::vector<std::vector<long long>> paths = {{}};
  for (int layer = k; layer >= 1; --layer) {
    std::vector<std::vector<long long>> next;
    for (const auto& p : paths) {
      for (long long i = 0; i < params.codeword_counts[static_cast<std::size_t>(layer) - 1];
           ++i) {
        auto q = p;
        q.push_back(i);
        next.push_back(std::move(q));
      }
    }
    paths = std::move(next);
  }
  return paths;
}

// Independent linear-domain oracle for (1/n) H(W_S | Z): builds the explicit
// joint p(group, z) by looping over paths and z sequences.
double oracle_equivocation(const CodebookHierarchy& book, const DegradedBcSpec& spec,
                           const MessageSubset& subset) {
  const CodeParams& params = book.params();
  const int k = book.layers();
  const int n = params.n;
  const DiscreteChannel wz = wiretap_channel(spec);
  const int zc = wz.output_size();

  const auto paths = all_paths(params);
  long long group_count = 1;
  switch (subset.kind) {
    case MessageSubset::Kind::Single:
      group_count = params.message_counts[static_cast<std::size_t>(subset.k) - 1];
      break;
    case MessageSubset::Kind::AdjacentPair:
      group_count = params.message_counts[static_cast<std::size_t>(subset.k) - 1] *
                    params.message_counts[static_cast<std::size_t>(subset.k)];
      break;
    case MessageSubset::Kind::Full:
      for (long long l : params.message_counts) group_count *= l;
      break;
  }
  auto group_of = [&](const std::vector<long long>& path) {
    switch (subset.kind) {
      case MessageSubset::Kind::Single:
        return book.split_index(subset.k, path[static_cast<std::size_t>(k - subset.k)])
            .first;
      case MessageSubset::Kind::AdjacentPair: {
        const long long lo =
            book.split_index(subset.k, path[static_cast<std::size_t>(k - subset.k)]).first;
        const long long hi =
            book.split_index(subset.k + 1,
                             path[static_cast<std::size_t>(k - subset.k - 1)])
                .first;
        return lo * params.message_counts[static_cast<std::size_t>(subset.k)] + hi;
      }
      case MessageSubset::Kind::Full: {
        long long g = 0;
        for (int layer = k; layer >= 1; --layer)
          g = g * params.message_counts[static_cast<std::size_t>(layer) - 1] +
              book.split_index(layer, path[static_cast<std::size_t>(k - layer)]).first;
        return g;
      }
    }
    return 0LL;
  };

  long long z_total = 1;
  for (int i = 0; i < n; ++i) z_total *= zc;

  double h = 0.0;
  for (long long zi = 0; zi < z_total; ++zi) {
    std::vector<int> z(static_cast<std::size_t>(n));
    long long rem = zi;
    for (int i = n - 1; i >= 0; --i) {
      z[static_cast<std::size_t>(i)] = static_cast<int>(rem % zc);
      rem /= zc;
    }
    std::vector<double> joint(static_cast<std::size_t>(group_count), 0.0);
    double pz = 0.0;
    for (const auto& path : paths) {
      const std::vector<int> x = book.codeword(1, path);
      double p = 1.0 / static_cast<double>(paths.size());
      for (int i = 0; i < n; ++i) p *= wz(x[static_cast<std::size_t>(i)],
                                          z[static_cast<std::size_t>(i)]);
      joint[static_cast<std::size_t>(group_of(path))] += p;
      pz += p;
    }
    if (pz <= 0.0) continue;
    for (double g : joint)
      if (g > 0.0) h -= g * std::log2(g / pz);
  }
  return h / static_cast<double>(n);
}

}  // namespace

TEST_CASE("exact equivocation") {
  SUBCASE("independent wiretapper retains the full message rate") {
    DegradedBcSpec spec{1,
                        DiscreteChannel::binary_symmetric(0.1),
                        {DiscreteChannel::binary_symmetric(0.5)}};
    CodeParams p = make_code_params(4, rt({0.5}), rr({0.25}), 5);
    CodebookHierarchy book(uniform_input(2), p, 0);
    const double re = exact_equivocation(book, spec, MessageSubset::single(1));
    CHECK(re == doctest::Approx(std::log2(4.0) / 4.0).epsilon(1e-12));
  }

  SUBCASE("constant messages have zero equivocation") {
    DegradedBcSpec spec{1,
                        DiscreteChannel::binary_symmetric(0.1),
                        {DiscreteChannel::binary_symmetric(0.2)}};
    CodeParams p = make_code_params(4, rt({0.0}), rr({0.5}), 6);
    REQUIRE(p.message_counts[0] == 1);
    CodebookHierarchy book(uniform_input(2), p, 0);
    CHECK(exact_equivocation(book, spec, MessageSubset::single(1)) ==
          doctest::Approx(0.0).epsilon(1e-12));
  }

  SUBCASE("n=2 instance matches the hand enumeration over all 4 z sequences") {
    DegradedBcSpec spec{1,
                        DiscreteChannel::binary_symmetric(0.15),
                        {DiscreteChannel::binary_symmetric(0.2)}};
    CodeParams p = make_code_params(2, rt({0.5}), rr({0.5}), 7);
    REQUIRE(p.codeword_counts[0] == 4);
    CodebookHierarchy book(uniform_input(2), p, 0);
    const double re = exact_equivocation(book, spec, MessageSubset::single(1));
    const double want = oracle_equivocation(book, spec, MessageSubset::single(1));
    CHECK(re == doctest::Approx(want).epsilon(1e-9));
  }

  SUBCASE("K=2 pairs and sum match the oracle") {
    DegradedBcSpec spec{2,
                        DiscreteChannel::binary_symmetric(0.1),
                        {DiscreteChannel::binary_symmetric(0.15),
                         DiscreteChannel::binary_symmetric(0.2)}};
    ChainDistribution chain(2, {DiscreteChannel::constant_row(1, {0.5, 0.5}),
                                DiscreteChannel::binary_symmetric(0.2)});
    CodeParams p = make_code_params(2, rt({0.5, 0.5}), rr({0.5, 0.0}), 8);
    CodebookHierarchy book(chain, p, 0);
    for (const MessageSubset& s :
         {MessageSubset::single(1), MessageSubset::single(2),
          MessageSubset::adjacent_pair(1), MessageSubset::full()}) {
      CHECK(exact_equivocation(book, spec, s) ==
            doctest::Approx(oracle_equivocation(book, spec, s)).epsilon(1e-9));
    }
  }

  SUBCASE("K=3 singles, both adjacent pairs and the sum match the oracle") {
    DegradedBcSpec spec{3,
                        DiscreteChannel::binary_symmetric(0.05),
                        {DiscreteChannel::binary_symmetric(0.1),
                         DiscreteChannel::binary_symmetric(0.12),
                         DiscreteChannel::binary_symmetric(0.15)}};
    ChainDistribution chain(3, {DiscreteChannel::constant_row(1, {0.6, 0.4}),
                                DiscreteChannel::binary_symmetric(0.15),
                                DiscreteChannel::binary_symmetric(0.1)});
    CodeParams p = make_code_params(2, rt({0.5, 0.5, 0.5}), rr({0.5, 0.0, 0.5}), 17);
    CodebookHierarchy book(chain, p, 0);
    for (const MessageSubset& s :
         {MessageSubset::single(1), MessageSubset::single(2), MessageSubset::single(3),
          MessageSubset::adjacent_pair(1), MessageSubset::adjacent_pair(2),
          MessageSubset::full()}) {
      CHECK(exact_equivocation(book, spec, s) ==
            doctest::Approx(oracle_equivocation(book, spec, s)).epsilon(1e-9));
    }
    // non-adjacent pairs are not representable; the nearest invalid shape is
    // an out-of-range adjacent pair
    CHECK_THROWS_AS(exact_equivocation(book, spec, MessageSubset::adjacent_pair(3)),
                    ValidationError);
  }

  SUBCASE("equivocation is bounded by the message entropy rate") {
    std::mt19937 gen(12);
    for (int rep = 0; rep < 5; ++rep) {
      DegradedBcSpec spec = random_degraded_spec(gen, 2, 2);
      ChainDistribution chain = random_chain(gen, spec);
      CodeParams p = make_code_params(3, rt({0.4, 0.4}), rr({0.3, 0.3}), 9 + rep);
      CodebookHierarchy book(chain, p, 0);
      double cap = 0.0;
      for (long long l : p.message_counts)
        cap += std::log2(static_cast<double>(l)) / p.n;
      const double re = exact_equivocation(book, spec, MessageSubset::full());
      CHECK(re >= 0.0);
      CHECK(re <= cap + 1e-9);
    }
  }

  SUBCASE("budget refusal") {
    DegradedBcSpec spec{1,
                        DiscreteChannel::binary_symmetric(0.1),
                        {DiscreteChannel::binary_symmetric(0.2)}};
    CodeParams p = make_code_params(4, rt({0.5}), rr({0.25}), 5);
    CodebookHierarchy book(uniform_input(2), p, 0);
    CHECK_THROWS_AS(exact_equivocation(book, spec, MessageSubset::single(1), 8),
                    BudgetError);
  }

  SUBCASE("out-of-range subsets are rejected") {
    DegradedBcSpec spec{1,
                        DiscreteChannel::binary_symmetric(0.1),
                        {DiscreteChannel::binary_symmetric(0.2)}};
    CodeParams p = make_code_params(2, rt({0.5}), rr({0.0}), 5);
    CodebookHierarchy book(uniform_input(2), p, 0);
    CHECK_THROWS_AS(exact_equivocation(book, spec, MessageSubset::single(2)),
                    ValidationError);
    CHECK_THROWS_AS(exact_equivocation(book, spec, MessageSubset::adjacent_pair(1)),
                    ValidationError);
  }
}

TEST_CASE("monte-carlo equivocation") {
  SUBCASE("independent wiretapper estimate is exact with zero spread") {
    DegradedBcSpec spec{1,
                        DiscreteChannel::binary_symmetric(0.1),
                        {DiscreteChannel::binary_symmetric(0.5)}};
    CodeParams p = make_code_params(4, rt({0.5}), rr({0.25}), 5);
    CodebookHierarchy book(uniform_input(2), p, 0);
    McEstimate est =
        mc_equivocation(book, spec, MessageSubset::single(1), 50, SplitRng(3));
    CHECK(est.value == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(est.std_error == doctest::Approx(0.0).epsilon(1e-12));
  }

  SUBCASE("agrees with exact within 3 standard errors") {
    DegradedBcSpec spec{1,
                        DiscreteChannel::binary_symmetric(0.1),
                        {DiscreteChannel::binary_symmetric(0.25)}};
    CodeParams p = make_code_params(6, rt({0.34}), rr({0.34}), 11);
    CodebookHierarchy book(uniform_input(2), p, 0);
    const double exact = exact_equivocation(book, spec, MessageSubset::single(1));
    McEstimate est =
        mc_equivocation(book, spec, MessageSubset::single(1), 600, SplitRng(13));
    REQUIRE(est.std_error > 0.0);
    CHECK(std::abs(est.value - exact) <= 3.0 * est.std_error);
  }

  SUBCASE("a single sample reports an infinite standard error") {
    DegradedBcSpec spec{1,
                        DiscreteChannel::binary_symmetric(0.1),
                        {DiscreteChannel::binary_symmetric(0.2)}};
    CodeParams p = make_code_params(3, rt({0.4}), rr({0.0}), 5);
    CodebookHierarchy book(uniform_input(2), p, 0);
    McEstimate est =
        mc_equivocation(book, spec, MessageSubset::single(1), 1, SplitRng(1));
    CHECK(std::isinf(est.std_error));
  }
}

TEST_CASE("wiretapper subcode decoding") {
  SUBCASE("a single-codeword subcode never errs") {
    DegradedBcSpec spec{1,
                        DiscreteChannel::binary_symmetric(0.1),
                        {DiscreteChannel::binary_symmetric(0.2)}};
    CodeParams p = make_code_params(4, rt({0.5}), rr({0.0}), 5);
    REQUIRE(p.subcode_sizes[0] == 1);
    CodebookHierarchy book(uniform_input(2), p, 0);
    WiretapDecodeStats stats = wiretapper_subcode_error(book, spec, 1, 200, SplitRng(2));
    CHECK(stats.average_error == 0.0);
  }

  SUBCASE("constant-row wiretap marginal reduces to guessing") {
    DegradedBcSpec spec{1,
                        DiscreteChannel::binary_symmetric(0.1),
                        {DiscreteChannel::binary_symmetric(0.5)}};
    CodeParams p = make_code_params(4, rt({0.25}), rr({0.5}), 5);
    REQUIRE(p.subcode_sizes[0] == 4);
    CodebookHierarchy book(uniform_input(2), p, 0);
    WiretapDecodeStats stats =
        wiretapper_subcode_error(book, spec, 1, 4000, SplitRng(21));
    const double want = 1.0 - 1.0 / 4.0;
    const double sd = std::sqrt(want * (1 - want) / 4000.0);
    CHECK(std::abs(stats.average_error - want) <= 3.0 * sd);
  }

  SUBCASE("weights sum to one and errors stay in range") {
    DegradedBcSpec spec{1,
                        DiscreteChannel::binary_symmetric(0.1),
                        {DiscreteChannel::binary_symmetric(0.3)}};
    CodeParams p = make_code_params(5, rt({0.4}), rr({0.4}), 5);
    CodebookHierarchy book(uniform_input(2), p, 0);
    WiretapDecodeStats stats =
        wiretapper_subcode_error(book, spec, 1, 500, SplitRng(4));
    double total = 0.0;
    for (double q : stats.weights) total += q;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    for (double e : stats.subcode_errors) {
      CHECK(e >= 0.0);
      CHECK(e <= 1.0);
    }
  }

  SUBCASE("matches an exhaustive error computation on a tiny instance") {
    DegradedBcSpec spec{1,
                        DiscreteChannel::binary_symmetric(0.2),
                        {DiscreteChannel::binary_symmetric(0.25)}};
    CodeParams p = make_code_params(2, rt({0.5}), rr({0.5}), 37);
    CodebookHierarchy book(uniform_input(2), p, 0);
    const DiscreteChannel wz = wiretap_channel(spec);

    // exact error of the same genie decoder: enumerate every (path, z)
    const auto paths = all_paths(p);
    double exact = 0.0;
    for (const auto& path : paths) {
      const std::vector<int> x = book.codeword(1, path);
      const auto [w_true, secret_true] = book.split_index(1, path[0]);
      for (int z0 = 0; z0 < 2; ++z0)
        for (int z1 = 0; z1 < 2; ++z1) {
          const double pz = wz(x[0], z0) * wz(x[1], z1);
          double best = -1.0;
          long long best_secret = 0;
          for (long long cand = 0; cand < p.subcode_sizes[0]; ++cand) {
            std::vector<long long> cp = {book.combined_index(1, w_true, cand)};
            const std::vector<int> cx = book.codeword(1, cp);
            const double like = wz(cx[0], z0) * wz(cx[1], z1);
            if (like > best) {
              best = like;
              best_secret = cand;
            }
          }
          if (best_secret != secret_true) exact += pz;
        }
    }
    exact /= static_cast<double>(paths.size());

    const long long trials = 20000;
    WiretapDecodeStats stats =
        wiretapper_subcode_error(book, spec, 1, trials, SplitRng(55));
    const double sd = std::sqrt(std::max(exact * (1 - exact), 1e-6) /
                                static_cast<double>(trials));
    CHECK(std::abs(stats.average_error - exact) <= 4.0 * sd);
  }
}

TEST_CASE("leakage report") {
  CodeParams p = make_code_params(4, rt({0.5, 0.5}), rr({0.25, 0.0}), 5);

  SUBCASE("zero gap passes at any tolerance") {
    EquivocationInputs in;
    in.single = {0.5, 0.5};  // both references are log2(4)/4 = 0.5
    in.pair = {1.0};
    in.sum = 1.0;
    EquivocationReport rep = leakage_report(p, in, 0.0);
    CHECK(rep.single_gap[0] == 0.0);
    CHECK(rep.single_ok[0]);
    CHECK(rep.pair_gap[0] == 0.0);
    CHECK(rep.sum_gap == 0.0);
    CHECK(rep.sum_ok);
  }

  SUBCASE("a leak of half a bit fails a 0.1 tolerance") {
    EquivocationInputs in;
    in.single = {0.0, 0.5};
    EquivocationReport rep = leakage_report(p, in, 0.1);
    CHECK(rep.single_gap[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(!rep.single_ok[0]);
    CHECK(rep.single_ok[1]);
  }

  SUBCASE("references use the actual message counts") {
    CodeParams q = make_code_params(5, rt({0.5}), rr({0.0}), 5);
    // L = ceil(2^2.5) = 6 messages: reference is log2(6)/5, not 0.5
    EquivocationInputs in;
    in.single = {std::log2(6.0) / 5.0};
    EquivocationReport rep = leakage_report(q, in, 1e-12);
    CHECK(rep.reference_rates[0] == doctest::Approx(std::log2(6.0) / 5.0));
    CHECK(rep.single_ok[0]);
  }

  SUBCASE("NaN slots mean 'not computed' and never fail") {
    EquivocationInputs in;
    in.single = {std::numeric_limits<double>::quiet_NaN(), 0.5};
    EquivocationReport rep = leakage_report(p, in, 0.0);
    CHECK(rep.single_ok[0]);
    CHECK(std::isnan(rep.single_gap[0]));
  }
}

TEST_CASE("conditioning on the wiretap output can only lose rate") {
  DegradedBcSpec spec{1,
                      DiscreteChannel::binary_symmetric(0.05),
                      {DiscreteChannel::binary_symmetric(0.1)}};
  CodeParams p = make_code_params(4, rt({0.5}), rr({0.0}), 23);
  CodebookHierarchy book(uniform_input(2), p, 0);
  const double re = exact_equivocation(book, spec, MessageSubset::single(1));
  const double rate = std::log2(static_cast<double>(p.message_counts[0])) / p.n;
  CHECK(re <= rate + 1e-9);
  // with no randomization the strong wiretapper pins messages down
  CHECK(re < rate);
}
