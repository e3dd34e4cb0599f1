#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace mcout {

/// Deterministic random stream: xoshiro256** seeded through SplitMix64, with
/// stream-id k obtained by applying the generator's 2^128-step jump k times.
/// Streams with distinct ids are therefore non-overlapping segments of one
/// period, and identical (seed, stream-id) pairs reproduce bit-identical draws
/// on any platform.
///
/// Variate methods are fixed project-wide so demo output is reproducible:
///   uniform  53-bit mantissa, open interval (0, 1)
///   normal   inversion of the standard normal CDF, one uniform per variate
///   gamma    Marsaglia-Tsang squeeze/rejection (shape >= 1); for shape < 1
///            a shape+1 draw is scaled by U^(1/shape)
///
/// Satisfies UniformRandomBitGenerator. Single owner; not thread-safe.
class RngStream {
public:
    using result_type = std::uint64_t;

    explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
    result_type operator()() { return next(); }

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream_id() const noexcept { return stream_id_; }

    double uniform();
    double normal();
    double normal(double mean, double sd) { return mean + sd * normal(); }
    /// Gamma with the given shape and rate (mean shape / rate).
    double gamma(double shape, double rate);

private:
    std::uint64_t next();
    void jump();

    std::array<std::uint64_t, 4> s_{};
    std::uint64_t seed_;
    std::uint64_t stream_id_;
};

}  // namespace mcout
