#include "seqlep/noise_stream.hpp"

#include <cmath>
#include <numbers>

namespace seqlep {

namespace {

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t replication_index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xFFFFFFFFULL),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(replication_index & 0xFFFFFFFFULL),
                      static_cast<std::uint32_t>(replication_index >> 32)};
    return std::mt19937_64(seq);
}

}  // namespace

NoiseStream::NoiseStream(std::uint64_t seed, std::uint64_t replication_index)
    : engine_(make_engine(seed, replication_index)) {}

double NoiseStream::next_uniform() {
    constexpr double scale = 0x1.0p-53;
    return static_cast<double>((engine_() >> 11) + 1) * scale;
}

double NoiseStream::next() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_;
    }
    const double u1 = next_uniform();
    const double u2 = next_uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    cached_ = radius * std::sin(angle);
    has_cached_ = true;
    return radius * std::cos(angle);
}

}  // namespace seqlep
