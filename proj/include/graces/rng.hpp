#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace graces {

// Seeded generator with named sub-streams.
//
// Draws come from std::mt19937_64, whose output sequence is fixed by the
// standard; uniform and normal variates are produced here rather than by the
// implementation-defined <random> distributions so sequences match across
// standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0);

    std::uint64_t seed() const noexcept { return seed_; }

    // Independent stream keyed by (this seed, purpose, a, b). Does not advance *this.
    Rng substream(std::string_view purpose, std::uint64_t a = 0, std::uint64_t b = 0) const;

    std::uint64_t next_u64();
    // Uniform on [0, 1) with 53 random bits.
    double uniform();
    double uniform(double lo, double hi);
    // Uniform integer in [0, bound).
    std::uint64_t below(std::uint64_t bound);
    double standard_normal();
    bool bernoulli(double p);

    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

std::uint64_t mix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t seed, std::string_view purpose, std::uint64_t a = 0,
                          std::uint64_t b = 0);

// count independent N(0, variance) draws. variance == 0 gives exact zeros.
std::vector<double> gaussian_sample(Rng& rng, std::size_t count, double variance);

}  // namespace graces
