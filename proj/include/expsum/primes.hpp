#pragma once

#include <cstdlib>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "expsum/arith.hpp"

namespace expsum {

inline constexpr u64 default_sieve_limit = 10'000'000;

/// Sieve cap, overridable through EXPSUM_SIEVE_LIMIT.
[[nodiscard]] inline u64 sieve_limit() {
    if (const char* env = std::getenv("EXPSUM_SIEVE_LIMIT")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0' && v >= 2) return v;
    }
    return default_sieve_limit;
}

/// All primes up to at least n, built once per size band and shared.
[[nodiscard]] inline std::shared_ptr<const std::vector<u64>> primes_up_to(u64 n) {
    if (n > sieve_limit())
        throw sieve_limit_error("prime sieve of size " + std::to_string(n) + " exceeds limit " +
                                std::to_string(sieve_limit()));
    static std::mutex mu;
    static std::shared_ptr<const std::vector<u64>> cache;
    static u64 cached_to = 0;
    std::lock_guard lock(mu);
    if (cache && cached_to >= n) return cache;
    const u64 to = std::max<u64>(n, 2 * cached_to);
    const u64 built = std::min(to, std::max(n, sieve_limit()));
    std::vector<char> comp(built + 1, 0);
    auto out = std::make_shared<std::vector<u64>>();
    for (u64 i = 2; i <= built; ++i) {
        if (comp[i]) continue;
        out->push_back(i);
        for (u64 j = i * i; j <= built; j += i) comp[j] = 1;
    }
    cache = out;
    cached_to = built;
    return cache;
}

} // namespace expsum
