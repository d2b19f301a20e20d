// Counter-based random numbers.
//
// Philox4x32-10 maps a (key, counter) pair to 128 independent-looking bits,
// so every Brownian increment is addressed directly by
// (base_seed, path_id, step, mode) and can be regenerated in isolation --
// no sequential stream state, no replay bookkeeping when lattices are
// coarsened or truncated, and distinct paths can be generated concurrently.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace spde {

using PhiloxBlock = std::array<std::uint32_t, 4>;

// One 10-round Philox4x32 block: counter (c0..c3) under key (k0, k1).
inline PhiloxBlock philox4x32(std::uint32_t k0, std::uint32_t k1,
                              std::uint32_t c0, std::uint32_t c1,
                              std::uint32_t c2, std::uint32_t c3) {
    constexpr std::uint32_t kMul0 = 0xD2511F53u;
    constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c0;
        const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c2;
        const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
        const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
        c0 = hi1 ^ c1 ^ k0;
        c1 = lo1;
        c2 = hi0 ^ c3 ^ k1;
        c3 = lo0;
        k0 += kWeyl0;
        k1 += kWeyl1;
    }
    return {c0, c1, c2, c3};
}

inline double u64_to_unit(std::uint64_t x) { // [0, 1)
    return static_cast<double>(x >> 11) * 0x1.0p-53;
}

inline double u64_to_open_unit(std::uint64_t x) { // (0, 1]
    return (static_cast<double>(x >> 11) + 1.0) * 0x1.0p-53;
}

// Standard normal draw addressed by (seed, stream, a, b); Box-Muller on the
// two 64-bit halves of one Philox block.
inline double keyed_gaussian(std::uint64_t seed, std::uint64_t stream,
                             std::uint32_t a, std::uint32_t b) {
    const PhiloxBlock r = philox4x32(static_cast<std::uint32_t>(seed),
                                     static_cast<std::uint32_t>(seed >> 32),
                                     static_cast<std::uint32_t>(stream),
                                     static_cast<std::uint32_t>(stream >> 32),
                                     a, b);
    const std::uint64_t hi = (static_cast<std::uint64_t>(r[0]) << 32) | r[1];
    const std::uint64_t lo = (static_cast<std::uint64_t>(r[2]) << 32) | r[3];
    const double u1 = u64_to_open_unit(hi);
    const double u2 = u64_to_unit(lo);
    constexpr double kTwoPi = 6.28318530717958647692;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

} // namespace spde
