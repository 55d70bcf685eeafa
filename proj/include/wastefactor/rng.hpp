#pragma once

#include <array>
#include <cstdint>
#include <utility>

namespace wastefactor {

/**
 * @brief Philox4x32-10 block function (Salmon et al., SC'11).
 *
 * Stateless: maps a 128-bit counter and 64-bit key to 128 random bits.
 */
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key);

/**
 * @brief Counter-based random source keyed by a 64-bit seed.
 *
 * Every draw is addressed by (stream, i, j), so the value for a given
 * address never depends on how many other draws were made. Conversions to
 * floating point use only integer arithmetic and IEEE-exact scaling; the
 * normal transform goes through std::log/std::cos/std::sqrt.
 */
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t seed() const { return seed_; }
    std::array<std::uint32_t, 4> block(std::uint32_t stream, std::uint32_t i, std::uint32_t j = 0) const;

    /// Two independent uniforms in the open interval (0, 1), 53-bit resolution.
    std::pair<double, double> uniform2(std::uint32_t stream, std::uint32_t i, std::uint32_t j = 0) const;
    /// Standard normal via Box-Muller on uniform2.
    double normal(std::uint32_t stream, std::uint32_t i, std::uint32_t j = 0) const;

private:
    std::uint64_t seed_;
};

/// Map 64 random bits to a double in (0, 1).
double to_open_unit(std::uint64_t bits);

}  // namespace wastefactor
