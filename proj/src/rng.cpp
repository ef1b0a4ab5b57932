#include "blochlab/rng.hpp"

#include <cmath>

namespace blochlab {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

}  // namespace

Rng::Rng(std::uint64_t seed) {
    std::uint64_t s = seed;
    for (auto& word : state_) word = splitmix64(s);
}

std::uint64_t Rng::next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double Rng::uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform01() - 1.0;
        v = 2.0 * uniform01() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    has_spare_ = true;
    return u * m;
}

Cplx Rng::complex_normal() {
    const double re = normal();
    const double im = normal();
    return {re, im};
}

CVec Rng::unit_vector(int dim) {
    CVec z(dim);
    double n2 = 0.0;
    do {
        n2 = 0.0;
        for (int k = 0; k < dim; ++k) {
            z[k] = complex_normal();
            n2 += std::norm(z[k]);
        }
    } while (n2 == 0.0);
    const double inv = 1.0 / std::sqrt(n2);
    for (auto& c : z) c *= inv;
    return z;
}

CVec Rng::ball_point(int dim, double radius) {
    CVec z = unit_vector(dim);
    // Volume measure on C^dim is area measure on R^{2 dim}.
    const double r = radius * std::pow(uniform01(), 1.0 / (2.0 * dim));
    for (auto& c : z) c *= r;
    return z;
}

}  // namespace blochlab
