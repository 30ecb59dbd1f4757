#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "sigtri/sampling.hpp"

using namespace sigtri;

TEST_CASE("split_seed separates and reproduces workers") {
    CHECK(split_seed(123, 0) != split_seed(123, 1));
    CHECK(split_seed(123, 5) == split_seed(123, 5));
    CHECK(split_seed(123, 0) != split_seed(124, 0));

    // injective over a window of indices
    std::vector<std::uint64_t> seeds;
    for (std::uint64_t i = 0; i < 1000; ++i) seeds.push_back(split_seed(99, i));
    std::sort(seeds.begin(), seeds.end());
    CHECK(std::adjacent_find(seeds.begin(), seeds.end()) == seeds.end());
}

TEST_CASE("worker streams replay and are uncorrelated") {
    Rng a0(split_seed(7, 0)), a1(split_seed(7, 0));
    for (int i = 0; i < 100; ++i) CHECK(a0.next() == a1.next());

    // xor-agreement of two fair bit streams should sit at 1/2
    Rng x(split_seed(7, 0)), y(split_seed(7, 1));
    const int n = 200000;
    int agree = 0;
    for (int i = 0; i < n; ++i) agree += (x.next() & 1) == (y.next() & 1);
    double freq = static_cast<double>(agree) / n;
    double se = std::sqrt(0.25 / n);
    CHECK(std::abs(freq - 0.5) < 3 * se);
}

TEST_CASE("bernoulli draws match their rate") {
    BernoulliSource always(1.0, 1);
    BernoulliSource never(0.0, 2);
    for (int i = 0; i < 1000; ++i) {
        CHECK(always.draw());
        CHECK_FALSE(never.draw());
    }

    const double p = 0.25;  // 1/k with k=4
    const int n = 200000;
    BernoulliSource src(p, 3);
    int hits = 0;
    for (int i = 0; i < n; ++i) hits += src.draw();
    double se = std::sqrt(p * (1 - p) / n);
    CHECK(std::abs(static_cast<double>(hits) / n - p) < 3 * se);
}

TEST_CASE("pairwise hash degenerate rates") {
    PairwiseHash all(1.0, 64, 5);
    PairwiseHash none(0.0, 64, 5);
    for (std::uint64_t u = 0; u < 64; ++u) {
        CHECK(all(u));
        CHECK_FALSE(none(u));
    }
}

TEST_CASE("pairwise hash is repeatable per seed") {
    PairwiseHash h1(0.5, 1024, 99), h2(0.5, 1024, 99), h3(0.5, 1024, 100);
    bool any_diff = false;
    for (std::uint64_t u = 0; u < 1024; ++u) {
        CHECK(h1(u) == h2(u));
        any_diff |= h1(u) != h3(u);
    }
    CHECK(any_diff);
}

TEST_CASE("pairwise hash marginals and pair joints across seeds") {
    const double p = 0.25;
    const int trials = 40000;
    int hit_u = 0, hit_both = 0;
    for (int s = 0; s < trials; ++s) {
        PairwiseHash h(p, 1024, split_seed(1234, s));
        bool hu = h(17), hv = h(901);
        hit_u += hu;
        hit_both += hu && hv;
    }
    double se_m = std::sqrt(p * (1 - p) / trials);
    CHECK(std::abs(static_cast<double>(hit_u) / trials - p) < 3 * se_m);
    double pj = p * p;
    double se_j = std::sqrt(pj * (1 - pj) / trials);
    CHECK(std::abs(static_cast<double>(hit_both) / trials - pj) < 3 * se_j);
}

TEST_CASE("probability clamp") {
    CHECK(clamp_probability(1.7) == 1.0);
    CHECK(clamp_probability(-0.2) == 0.0);
    CHECK(clamp_probability(0.3) == 0.3);
    CHECK_THROWS_AS(clamp_probability(std::nan("")), std::invalid_argument);
}

TEST_CASE("bounded draw stays in range and covers it") {
    Rng rng(11);
    std::vector<int> seen(7, 0);
    for (int i = 0; i < 7000; ++i) ++seen[rng.bounded(7)];
    for (int c : seen) CHECK(c > 0);
    CHECK_THROWS_AS(rng.bounded(0), std::invalid_argument);
}
