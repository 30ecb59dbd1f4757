#include "sigtri/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sigtri {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t kMersenne61 = (1ULL << 61) - 1;

std::uint64_t mulmod61(std::uint64_t a, std::uint64_t b) {
    unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
    std::uint64_t lo = static_cast<std::uint64_t>(p & kMersenne61);
    std::uint64_t hi = static_cast<std::uint64_t>(p >> 61);
    std::uint64_t r = lo + hi;
    if (r >= kMersenne61) r -= kMersenne61;
    return r;
}

}  // namespace

std::uint64_t split_seed(std::uint64_t master, std::uint64_t index) {
    // index enters through an odd-constant multiply, so the map is injective
    // in index for fixed master; the finalizer decorrelates neighbours.
    return splitmix64(splitmix64(master) ^ ((index + 1) * 0xD1342543DE82EF95ULL));
}

std::uint64_t Rng::bounded(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("Rng::bounded: bound must be positive");
    std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
        std::uint64_t r = gen_();
        if (r >= threshold) return r % bound;
    }
}

double clamp_probability(double p) {
    if (std::isnan(p)) throw std::invalid_argument("probability is NaN");
    return std::clamp(p, 0.0, 1.0);
}

PairwiseHash::PairwiseHash(double p, std::uint64_t domain_size, std::uint64_t seed) {
    if (domain_size == 0) throw std::invalid_argument("PairwiseHash: empty domain");
    rate_ = clamp_probability(p);
    Rng rng(seed);
    a_ = 1 + rng.bounded(kMersenne61 - 1);
    b_ = rng.bounded(kMersenne61);
    threshold_ = static_cast<std::uint64_t>(std::llround(rate_ * static_cast<double>(kMersenne61)));
    if (rate_ >= 1.0) threshold_ = kMersenne61;  // h == 1 everywhere
}

bool PairwiseHash::operator()(std::uint64_t u) const {
    std::uint64_t x = mulmod61(a_, u % kMersenne61);
    x += b_;
    if (x >= kMersenne61) x -= kMersenne61;
    return x < threshold_;
}

}  // namespace sigtri
