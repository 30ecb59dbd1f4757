#pragma once

#include <cstdint>
#include <random>

namespace sigtri {

// Derives the seed for worker `index` from a master seed. Distinct indices
// give statistically independent generators; the mapping is injective in
// the index for a fixed master.
std::uint64_t split_seed(std::uint64_t master, std::uint64_t index);

// Seeded generator with fully specified output (no std distributions, so a
// run replays bit-identically across standard libraries).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next() { return gen_(); }

    // uniform in [0,1) with 53 random bits
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

    // uniform in [0, bound) by rejection; bound >= 1
    std::uint64_t bounded(std::uint64_t bound);

private:
    std::mt19937_64 gen_;
};

// Clamps a computed rate into [0,1]; parameterizations like 1/sqrt(km) can
// leave the unit interval on small instances.
double clamp_probability(double p);

// Fully independent Bernoulli(p) bit source.
class BernoulliSource {
public:
    BernoulliSource(double p, std::uint64_t seed) : p_(clamp_probability(p)), rng_(seed) {}

    bool draw() { return rng_.bernoulli(p_); }
    double rate() const { return p_; }

private:
    double p_;
    Rng rng_;
};

// Pairwise independent {0,1} hash over a vertex domain: affine map over the
// prime field 2^61-1 reduced to a threshold test. O(1) words of state,
// repeatable per (seed, u), marginal Pr(h(u)=1)=p up to 2^-61 quantization.
class PairwiseHash {
public:
    PairwiseHash(double p, std::uint64_t domain_size, std::uint64_t seed);

    bool operator()(std::uint64_t u) const;
    double rate() const { return rate_; }

private:
    std::uint64_t a_ = 0;
    std::uint64_t b_ = 0;
    std::uint64_t threshold_ = 0;
    double rate_ = 0.0;
};

}  // namespace sigtri
