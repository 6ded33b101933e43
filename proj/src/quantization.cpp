#include "membound/quantization.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace membound {

unsigned bits_for_levels(std::uint64_t count) {
    unsigned bits = 0;
    while (bits < 64 && (std::uint64_t{1} << bits) < count) {
        ++bits;
    }
    return bits;
}

std::uint64_t VectorCodec::levels_per_axis() const {
    return static_cast<std::uint64_t>(std::floor(2.0 * (radius + grid_step) / grid_step)) + 1;
}

VectorCodec make_vector_codec(std::size_t d, double radius, double max_error) {
    if (d == 0) {
        throw std::invalid_argument("make_vector_codec: dimension must be positive");
    }
    if (!(radius > 0.0) || !std::isfinite(radius)) {
        throw std::invalid_argument("make_vector_codec: radius must be positive");
    }
    if (!(max_error > 0.0) || max_error > radius) {
        throw std::invalid_argument("make_vector_codec: need 0 < max_error <= radius");
    }
    VectorCodec c{};
    c.dimension = d;
    c.radius = radius;
    c.max_error = max_error;
    c.grid_step = 2.0 * max_error / std::sqrt(static_cast<double>(d));
    c.max_index = static_cast<std::int64_t>(std::floor((radius + c.grid_step) / c.grid_step));
    c.bits_per_axis = bits_for_levels(c.levels_per_axis());
    if (c.bits_per_axis > 62) {
        throw std::invalid_argument("make_vector_codec: grid too fine for 64-bit fields");
    }
    c.bits_per_vector = d * c.bits_per_axis;
    return c;
}

Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1> grid_indices(const VectorCodec& codec, const Point& x) {
    Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1> idx(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        // ceil(y - 1/2) rounds to nearest with exact halves going down.
        idx[i] = static_cast<std::int64_t>(std::ceil(x[i] / codec.grid_step - 0.5));
    }
    return idx;
}

void encode_vector(const VectorCodec& codec, const Point& x, BitString& out) {
    if (static_cast<std::size_t>(x.size()) != codec.dimension) {
        throw std::invalid_argument("encode_vector: dimension mismatch");
    }
    if (!x.allFinite()) {
        throw std::invalid_argument("encode_vector: non-finite coordinate");
    }
    if (x.norm() > codec.radius * (1.0 + kNormSlack)) {
        throw std::out_of_range("encode_vector: point outside the codec ball");
    }
    const auto idx = grid_indices(codec, x);
    const std::uint64_t modulus = std::uint64_t{1} << codec.bits_per_axis;
    for (Eigen::Index i = 0; i < idx.size(); ++i) {
        const std::int64_t k = idx[i];
        const std::uint64_t field = k >= 0 ? static_cast<std::uint64_t>(k)
                                           : modulus - static_cast<std::uint64_t>(-k);
        out.append(field, codec.bits_per_axis);
    }
}

BitString encode_vector(const VectorCodec& codec, const Point& x) {
    BitString out;
    encode_vector(codec, x, out);
    return out;
}

Point decode_vector(const VectorCodec& codec, const BitString& bits, std::size_t offset) {
    const unsigned w = codec.bits_per_axis;
    const std::uint64_t half = std::uint64_t{1} << (w - 1);
    const std::uint64_t modulus = std::uint64_t{1} << w;
    Point x(static_cast<Eigen::Index>(codec.dimension));
    for (std::size_t i = 0; i < codec.dimension; ++i) {
        const std::uint64_t field = bits.read(offset + i * w, w);
        const std::int64_t k = field < half ? static_cast<std::int64_t>(field)
                                            : -static_cast<std::int64_t>(modulus - field);
        if (k < -codec.max_index || k > codec.max_index) {
            throw DomainError("decode_vector: field " + std::to_string(i) + " index " +
                              std::to_string(k) + " outside codebook");
        }
        x[static_cast<Eigen::Index>(i)] = static_cast<double>(k) * codec.grid_step;
    }
    return x;
}

double ScalarCodec::level_value(std::uint64_t level) const {
    // Product before division keeps exact multiples exact, e.g. 3 * 1 / 10 == 0.3.
    return lo + (static_cast<double>(level) * (hi - lo)) / static_cast<double>(intervals);
}

ScalarCodec make_scalar_codec(double lo, double hi, double step, Rounding rounding) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
        throw std::invalid_argument("make_scalar_codec: need finite lo < hi");
    }
    if (!(step > 0.0) || step > hi - lo) {
        throw std::invalid_argument("make_scalar_codec: need 0 < step <= hi - lo");
    }
    ScalarCodec c{};
    c.lo = lo;
    c.hi = hi;
    c.step = step;
    c.rounding = rounding;
    const double ratio = (hi - lo) / step;
    const double nearest = std::round(ratio);
    c.intervals = static_cast<std::uint64_t>(std::abs(ratio - nearest) <= 1e-9 * nearest ? nearest
                                                                                      : std::ceil(ratio));
    c.bits_per_scalar = bits_for_levels(c.levels());
    return c;
}

std::uint64_t encode_scalar(const ScalarCodec& codec, double v) {
    if (!std::isfinite(v)) {
        throw std::invalid_argument("encode_scalar: non-finite value");
    }
    if (v < codec.lo - codec.step || v > codec.hi + codec.step) {
        throw std::out_of_range("encode_scalar: value " + std::to_string(v) + " outside [" +
                                std::to_string(codec.lo) + ", " + std::to_string(codec.hi) + "]");
    }
    const double clamped = std::clamp(v, codec.lo, codec.hi);
    const double spacing = (codec.hi - codec.lo) / static_cast<double>(codec.intervals);
    const double y = (clamped - codec.lo) / spacing;
    const auto n = codec.intervals;
    auto k = static_cast<std::uint64_t>(std::clamp(std::floor(y), 0.0, static_cast<double>(n)));
    // Repair the floor against the exact level values.
    while (k > 0 && codec.level_value(k) > clamped) {
        --k;
    }
    while (k < n && codec.level_value(k + 1) <= clamped) {
        ++k;
    }
    if (codec.rounding == Rounding::nearest && k < n) {
        const double below = clamped - codec.level_value(k);
        const double above = codec.level_value(k + 1) - clamped;
        if (above < below) {
            ++k;
        }
    }
    return k;
}

double decode_scalar(const ScalarCodec& codec, std::uint64_t level) {
    if (level >= codec.levels()) {
        throw DomainError("decode_scalar: level " + std::to_string(level) + " outside codebook");
    }
    return codec.level_value(level);
}

}  // namespace membound
