#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "membound/geometry.hpp"
#include "membound/protocol.hpp"
#include "membound/quantization.hpp"

namespace membound {

/// Memory-bounded gradient descent at fixed step eta = B/(L sqrt(T)) with
/// iterates held on a grid of error D = B/T.
struct GDConfig {
    std::size_t dimension = 1;
    double lipschitz = 1.0;
    double radius = 1.0;
    double eps = 0.1;
    /// 0 selects ceil(9 L^2 B^2 / eps^2).
    std::size_t horizon = 0;
    /// Window of the F_best codec; hi <= lo selects [0, 2LB].
    double value_lo = 0.0;
    double value_hi = 0.0;
    std::uint64_t seed = 0;

    std::size_t effective_horizon() const;
    double stepsize() const;
    double iterate_error() const;
    double window_lo() const;
    double window_hi() const;
};

/// 9 L^2 B^2 / eps^2, the horizon at which the convergence guarantee starts.
double gd_min_horizon(double lipschitz, double radius, double eps);

/// Memory: encode(x_t) | encode(x_best) | F_best, where the F_best field holds
/// (N - level) of a round-down codec so that the blank state reads as the top
/// of the window.
struct GDLayout {
    VectorCodec iterate_codec;
    ScalarCodec value_codec;
    std::size_t x_offset;
    std::size_t best_offset;
    std::size_t value_offset;
    std::size_t total_bits;

    double decode_best_value(const MemoryState& memory) const;
};

GDLayout make_gd_layout(const GDConfig& cfg);

AlgorithmSpec make_gd(const GDConfig& cfg);

/// Gradient descent that keeps only its current iterate, on a grid of error
/// `max_error`, and outputs it. With coarse grids this is GD squeezed into a
/// handful of bits.
AlgorithmSpec make_iterate_only_gd(std::size_t d, double lipschitz, double radius, std::size_t horizon,
                                   double max_error);

/// Writes nothing and outputs the origin; M is only declared.
AlgorithmSpec make_constant_output(std::size_t d, std::size_t memory_bits);

/// Queries table[(t-1) mod n] in turn and stores, in `memory_bits` bits, the
/// index of the last entry whose value was <= eps; outputs that entry. With
/// n <= 2^M entries it solves exactly the members whose optimum is tabled.
AlgorithmSpec make_lookup_table(std::vector<Point> table, std::size_t memory_bits, double eps);

/// Memory-bounded center of mass.
struct CoMConfig {
    std::size_t dimension = 1;
    double lipschitz = 1.0;
    double radius = 1.0;
    double eps = 0.1;
    std::size_t slack_factor = 2;
    std::uint64_t seed = 0;
    SamplerOptions sampler{};
    /// Window of the value codec; hi <= lo selects [0, 2LB].
    double value_lo = 0.0;
    double value_hi = 0.0;

    double alpha() const { return eps / (4.0 * lipschitz * radius); }
    /// ceil(3 d ln(1/alpha)).
    std::size_t base_horizon() const;
    std::size_t horizon() const { return base_horizon() * slack_factor; }
    double window_lo() const;
    double window_hi() const;
};

/// Replays the stored cut list. Each round appends (quantized subgradient,
/// quantized value); the anchor of cut k is the centroid of round k, recomputed
/// from the earlier cuts with the seed derive_seed(seed, k).
class CenterOfMass {
  public:
    explicit CenterOfMass(const CoMConfig& cfg);

    const CoMConfig& config() const { return cfg_; }
    const VectorCodec& gradient_codec() const { return gradient_codec_; }
    const ScalarCodec& value_codec() const { return value_codec_; }
    const VectorCodec& output_codec() const { return output_codec_; }
    std::size_t record_bits() const { return gradient_codec_.bits_per_vector + value_codec_.bits_per_scalar; }
    std::size_t total_bits() const { return cfg_.horizon() * record_bits(); }

    /// Centroids c_1..c_count, where c_k is estimated on the body cut by the
    /// first k-1 stored records.
    std::vector<Point> replay_centroids(const MemoryState& memory, std::size_t count) const;

    /// The body after the first `rounds` records, with anchors from replay.
    CutSet cut_set(const MemoryState& memory, std::size_t rounds) const;

    Point stored_gradient(const MemoryState& memory, std::size_t round) const;
    double stored_value(const MemoryState& memory, std::size_t round) const;

    Point decode(std::size_t t, const MemoryState& memory) const;
    MemoryState encode(std::size_t t, const MemoryState& memory, const FirstOrderReply& reply) const;
    /// Best stored value (ties to the earliest round), through the output codec.
    Point output(const MemoryState& memory) const;

  private:
    void append_cut(CutSet& body, const MemoryState& memory, std::size_t round, const Point& anchor) const;

    CoMConfig cfg_;
    VectorCodec gradient_codec_;
    ScalarCodec value_codec_;
    VectorCodec output_codec_;
};

AlgorithmSpec make_com(const CoMConfig& cfg);

/// 2 d log2(1 + 36 L^2 B^2/eps^2) + log2(2LB/eps).
double gd_memory_bound(std::size_t d, double lipschitz, double radius, double eps);

/// 3 d^2 log2^2(17LB/eps) + 3 d log2(4LB/eps) log2(2LB/eps) + d log2(1 + 4LB/eps).
double com_memory_bound(std::size_t d, double lipschitz, double radius, double eps);

}  // namespace membound
