#include "wastefactor/rng.hpp"

#include <cmath>
#include <numbers>

namespace wastefactor {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, ctr[0], hi0, lo0);
        mulhilo(kMul1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
}

std::array<std::uint32_t, 4> CounterRng::block(std::uint32_t stream, std::uint32_t i, std::uint32_t j) const {
    const std::array<std::uint32_t, 2> key{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)};
    return philox4x32_10({i, j, stream, 0u}, key);
}

double to_open_unit(std::uint64_t bits) {
    // 52 high bits, centred in their bucket. With 53 bits the top bucket
    // centre 1 - 2^-54 would round to 1.0.
    return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

std::pair<double, double> CounterRng::uniform2(std::uint32_t stream, std::uint32_t i, std::uint32_t j) const {
    const auto b = block(stream, i, j);
    const std::uint64_t x = (static_cast<std::uint64_t>(b[0]) << 32) | b[1];
    const std::uint64_t y = (static_cast<std::uint64_t>(b[2]) << 32) | b[3];
    return {to_open_unit(x), to_open_unit(y)};
}

double CounterRng::normal(std::uint32_t stream, std::uint32_t i, std::uint32_t j) const {
    const auto [u1, u2] = uniform2(stream, i, j);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace wastefactor
