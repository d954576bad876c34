#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string_view>

namespace seqlep {

/**
 * @brief Neumaier-compensated running sum.
 *
 * Accumulation order is whatever order add() is called in; callers that need
 * platform-independent results feed terms in ascending index order.
 */
class CompensatedSum {
public:
    void add(double term) noexcept {
        const double t = sum_ + term;
        if (std::fabs(sum_) >= std::fabs(term)) {
            compensation_ += (sum_ - t) + term;
        } else {
            compensation_ += (term - t) + sum_;
        }
        sum_ = t;
    }

    [[nodiscard]] double value() const noexcept { return sum_ + compensation_; }

private:
    double sum_ = 0.0;
    double compensation_ = 0.0;
};

/// Compensated sum of a span, ascending order.
[[nodiscard]] double compensated_sum(std::span<const double> terms) noexcept;

/// SplitMix64 finalizer; bijective 64-bit mix.
[[nodiscard]] constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/**
 * @brief Derive a child seed from a base seed and an ordered list of tags.
 *
 * Used to give every (suite, scenario, sample size) its own seed domain so
 * replications from different experiments never share a noise stream.
 */
[[nodiscard]] constexpr std::uint64_t derive_seed(std::uint64_t base,
                                                  std::initializer_list<std::uint64_t> tags) noexcept {
    std::uint64_t state = mix64(base);
    for (const auto tag : tags) {
        state = mix64(state ^ mix64(tag + 0x632BE59BD9B4E019ULL));
    }
    return state;
}

/// Stable 64-bit FNV-1a hash of a tag string, for seed-domain labels.
[[nodiscard]] constexpr std::uint64_t tag_hash(std::string_view text) noexcept {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (const char c : text) {
        h ^= static_cast<std::uint8_t>(c);
        h *= 0x100000001B3ULL;
    }
    return h;
}

/**
 * @brief Integral of f over [a, b] by adaptive Gauss-Kronrod (61 points).
 *
 * Absolute error below 1e-10 for smooth integrands on bounded intervals.
 */
[[nodiscard]] double integrate(const std::function<double(double)>& f, double a, double b);

}  // namespace seqlep
