#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace stablesim {

// Coin quantities are kept in integer base units so conservation checks can be
// exact. 10^8 units per coin, same convention as the usual satoshi split.
using Amount = int64_t;
inline constexpr Amount kCoin = 100'000'000;

// round-half-down integer division: nearest quotient, exact halves round down.
// Callers pass non-negative values; depreciation math never needs signs.
inline Amount div_round_half_down(__int128 num, __int128 den) {
    if (den <= 0) throw std::domain_error("div_round_half_down: non-positive divisor");
    if (num < 0) throw std::domain_error("div_round_half_down: negative value");
    if (num <= INT64_MAX && den <= INT64_MAX) {
        // 64-bit fast path: the per-cell decay loop lives here
        int64_t n = static_cast<int64_t>(num), d = static_cast<int64_t>(den);
        int64_t q = n / d, r = n % d;
        if (r > d - r) ++q;  // 2r > d without overflow
        return q;
    }
    __int128 q = num / den;
    __int128 r = num % den;
    if (r > den - r) ++q;
    return static_cast<Amount>(q);
}

// v * num / den with a wide intermediate, round half down.
inline Amount mul_div_half_down(Amount v, int64_t num, int64_t den) {
    return div_round_half_down(static_cast<__int128>(v) * num, den);
}

inline Amount to_units(double coins) {
    if (!(coins >= 0) || !std::isfinite(coins)) throw std::domain_error("to_units: bad amount");
    return static_cast<Amount>(std::llround(coins * static_cast<double>(kCoin)));
}

inline double to_coins(Amount units) {
    return static_cast<double>(units) / static_cast<double>(kCoin);
}

inline std::string format_coins(Amount units) {
    // fixed 8-decimal rendering, no locale surprises
    char buf[40];
    std::snprintf(buf, sizeof buf, "%lld.%08lld",
                  static_cast<long long>(units / kCoin),
                  static_cast<long long>(units % kCoin < 0 ? -(units % kCoin) : units % kCoin));
    return buf;
}

}  // namespace stablesim
