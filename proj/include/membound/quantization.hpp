#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "membound/bits.hpp"
#include "membound/rng.hpp"

namespace membound {

/// Raised when a bit pattern is not a codeword of the codec decoding it.
class DomainError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Relative slack accepted on the ||x|| <= R precondition of encode_vector so
/// that vectors normalized in floating point (||x|| = R(1 + 1e-16)) encode.
inline constexpr double kNormSlack = 1e-12;

/// Fixed-width encoder for points of the radius-R ball on an axis-aligned grid
/// of spacing s = 2D/sqrt(d) centred on the origin. The grid index i of each
/// axis lies in [-K, K] with K = floor((R + s)/s) and is stored in
/// bits_per_axis bits as two's complement, so the all-zero field is the origin.
struct VectorCodec {
    std::size_t dimension;
    double radius;
    double max_error;
    double grid_step;
    std::int64_t max_index;
    unsigned bits_per_axis;
    std::size_t bits_per_vector;

    /// floor(2(R + s)/s) + 1, the per-axis level count the bit width is sized for.
    std::uint64_t levels_per_axis() const;
};

VectorCodec make_vector_codec(std::size_t d, double radius, double max_error);

/// Appends bits_per_vector bits, coordinates in index order.
void encode_vector(const VectorCodec& codec, const Point& x, BitString& out);
BitString encode_vector(const VectorCodec& codec, const Point& x);

/// Reads bits_per_vector bits starting at `offset`; throws DomainError for
/// fields whose index falls outside [-K, K].
Point decode_vector(const VectorCodec& codec, const BitString& bits, std::size_t offset = 0);

/// Grid indices of the nearest codeword (ties toward -inf per axis).
Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1> grid_indices(const VectorCodec& codec, const Point& x);

enum class Rounding { down, nearest };

/// Uniform levels lo + k (hi - lo)/N, k = 0..N, with N = ceil((hi - lo)/step),
/// so the effective spacing never exceeds `step`.
struct ScalarCodec {
    double lo;
    double hi;
    double step;
    Rounding rounding;
    std::uint64_t intervals;
    unsigned bits_per_scalar;

    std::uint64_t levels() const { return intervals + 1; }
    double level_value(std::uint64_t level) const;
};

ScalarCodec make_scalar_codec(double lo, double hi, double step, Rounding rounding);

/// Level index for v. Values within one step outside [lo, hi] are clamped;
/// anything further out throws std::out_of_range.
std::uint64_t encode_scalar(const ScalarCodec& codec, double v);

/// Throws DomainError for level >= levels().
double decode_scalar(const ScalarCodec& codec, std::uint64_t level);

/// bits needed to distinguish `count` values, ceil(log2(count)); 0 for count <= 1.
unsigned bits_for_levels(std::uint64_t count);

}  // namespace membound
