#pragma once

#include <cstdint>
#include <random>

namespace seqlep {

/**
 * @brief Standard normal noise stream keyed by (seed, replication_index).
 *
 * The engine is std::mt19937_64 seeded through std::seed_seq with the four
 * 32-bit halves of the key, so every replication owns an independent stream
 * that does not depend on the order in which replications are run. Both the
 * engine and std::seed_seq are specified bit-exactly by the standard.
 *
 * Normals are produced with the Box-Muller transform on 53-bit uniforms, in
 * pairs (cosine branch first, sine branch second). std::normal_distribution
 * is avoided because its algorithm is implementation-defined.
 */
class NoiseStream {
public:
    NoiseStream(std::uint64_t seed, std::uint64_t replication_index);

    /// Next N(0,1) draw.
    double next();

    /// Next uniform draw in the half-open interval (0, 1].
    double next_uniform();

private:
    std::mt19937_64 engine_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace seqlep
