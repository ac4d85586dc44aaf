#include "graces/rng.hpp"

#include <cmath>

#include "graces/errors.hpp"

namespace graces {

std::uint64_t mix64(std::uint64_t x) {
    // splitmix64 finalizer
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::string_view purpose, std::uint64_t a,
                          std::uint64_t b) {
    std::uint64_t tag = 0xcbf29ce484222325ULL;  // FNV-1a
    for (unsigned char ch : purpose) {
        tag ^= ch;
        tag *= 0x100000001b3ULL;
    }
    std::uint64_t h = mix64(seed ^ mix64(tag));
    h = mix64(h ^ mix64(a + 0x632be59bd9b4e019ULL));
    h = mix64(h ^ mix64(b + 0x85157af5ULL));
    return h;
}

Rng::Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

Rng Rng::substream(std::string_view purpose, std::uint64_t a, std::uint64_t b) const {
    return Rng(derive_seed(seed_, purpose, a, b));
}

std::uint64_t Rng::next_u64() { return engine_(); }

double Rng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

std::uint64_t Rng::below(std::uint64_t bound) {
    if (bound == 0) throw InvalidArgument("Rng::below: bound must be positive");
    // rejection sampling keeps the result unbiased
    const std::uint64_t limit = bound * (UINT64_MAX / bound);
    std::uint64_t x = 0;
    do {
        x = next_u64();
    } while (x >= limit);
    return x % bound;
}

double Rng::standard_normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    // Marsaglia polar method
    double u = 0.0, v = 0.0, s = 0.0;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double factor = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * factor;
    has_spare_ = true;
    return u * factor;
}

bool Rng::bernoulli(double p) { return uniform() < p; }

std::vector<double> gaussian_sample(Rng& rng, std::size_t count, double variance) {
    if (!(variance >= 0.0)) throw InvalidArgument("gaussian_sample: variance must be >= 0");
    std::vector<double> out(count, 0.0);
    if (variance == 0.0) return out;
    const double sd = std::sqrt(variance);
    for (double& x : out) x = sd * rng.standard_normal();
    return out;
}

}  // namespace graces
