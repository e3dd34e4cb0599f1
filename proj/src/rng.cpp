#include "mcout/rng.hpp"

#include <bit>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/erf.hpp>

#include "mcout/errors.hpp"

namespace mcout {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
    std::uint64_t x = seed;
    for (auto& w : s_) w = splitmix64(x);
    for (std::uint64_t k = 0; k < stream_id; ++k) jump();
}

std::uint64_t RngStream::next() {
    const std::uint64_t result = std::rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = std::rotl(s_[3], 45);
    return result;
}

void RngStream::jump() {
    static constexpr std::array<std::uint64_t, 4> kJump = {
        0x180ec6d33cfd0abaULL, 0xd5a61266f0c9392cULL, 0xa9582618e03fc9aaULL,
        0x39abdc4529b1661cULL};
    std::array<std::uint64_t, 4> acc{};
    for (std::uint64_t word : kJump) {
        for (int b = 0; b < 64; ++b) {
            if (word & (std::uint64_t{1} << b)) {
                for (int i = 0; i < 4; ++i) acc[i] ^= s_[i];
            }
            next();
        }
    }
    s_ = acc;
}

double RngStream::uniform() {
    // Midpoint of one of 2^53 equal cells: never exactly 0 or 1.
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::normal() {
    // Phi^{-1}(u) = -sqrt(2) * erfc^{-1}(2u)
    return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * uniform());
}

double RngStream::gamma(double shape, double rate) {
    if (!(shape > 0.0) || !(rate > 0.0)) throw ParameterError("gamma shape and rate must be > 0");
    if (shape < 1.0) {
        const double g = gamma(shape + 1.0, rate);
        return g * std::pow(uniform(), 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x = 0.0;
        double v = 0.0;
        do {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return d * v / rate;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v / rate;
    }
}

}  // namespace mcout
