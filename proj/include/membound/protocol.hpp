#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "membound/bits.hpp"
#include "membound/instances.hpp"

namespace membound {

/// An encoder returned more than M bits.
class CapacityError : public std::runtime_error {
  public:
    CapacityError(std::size_t round, std::size_t bits, std::size_t capacity);
    std::size_t round() const { return round_; }

  private:
    std::size_t round_;
};

/// A decoder or output map produced a NaN/inf coordinate or a wrong-sized point.
class InvalidQueryError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// The M-bit state carried between oracle calls. The blank state is the empty
/// string, read as all zeros.
struct MemoryState {
    std::size_t capacity = 0;
    BitString bits;

    static MemoryState blank(std::size_t capacity) { return MemoryState{capacity, {}}; }
    std::size_t size() const { return bits.size(); }
    bool within_capacity() const { return bits.size() <= capacity; }

    friend bool operator==(const MemoryState&, const MemoryState&) = default;
};

/// Parameters of the problem class the algorithm was built for; recorded in
/// transcript headers.
struct ProblemParams {
    double lipschitz = 1.0;
    double radius = 1.0;
    double eps = 0.1;
    std::uint64_t seed = 0;
};

/// A member of the class of M-bit, T-query algorithms: decoders dec_t,
/// encoders enc_t and an output map. Rounds are numbered 1..T. The decoder
/// sees only (t, memory); the encoder additionally sees that round's reply.
struct AlgorithmSpec {
    using Decoder = std::function<Point(std::size_t t, const MemoryState& memory)>;
    using Encoder =
        std::function<MemoryState(std::size_t t, const MemoryState& memory, const FirstOrderReply& reply)>;
    using Output = std::function<Point(const MemoryState& memory)>;

    std::string name;
    std::size_t dimension = 0;
    std::size_t memory_budget = 0;
    std::size_t horizon = 0;
    ProblemParams params;
    Decoder decode;
    Encoder encode;
    Output output;
};

struct RoundRecord {
    std::size_t t;
    Point query;
    FirstOrderReply reply;
    MemoryState memory;
};

struct Transcript {
    std::string instance;
    std::size_t dimension = 0;
    std::size_t memory_budget = 0;
    std::size_t horizon = 0;
    ProblemParams params;
    std::vector<RoundRecord> rounds;
    Point output;
    std::size_t peak_memory_bits = 0;
    std::optional<double> suboptimality;
};

/// Runs the T decode -> query -> encode rounds from the blank state, then the
/// output map on the final state.
Transcript run(const AlgorithmSpec& alg, const ConvexInstance& f);

/// Line-oriented text form:
///   transcript v1
///   d=.. L=.. B=.. eps=.. M=.. T=.. seed=..
///   instance TOKEN
///   round t x_1 .. x_d F memory_bit_length   (T lines)
///   output x_1 .. x_d
///   subopt VALUE|unavailable
/// Reals use the shortest round-trip decimal.
std::string serialize_transcript(const Transcript& transcript);

void write_transcript(const Transcript& transcript, const std::filesystem::path& path);

inline constexpr std::size_t kMaxEnumerationBits = 20;

struct OutputEnumeration {
    /// Distinct output points, in order of first appearance over states 0..2^M-1.
    std::vector<Point> points;
    /// Final states the output map rejected as non-codewords.
    std::size_t rejected_states = 0;
};

/// Applies the output map to every M-bit state. Refuses M > 20.
OutputEnumeration enumerate_outputs(const AlgorithmSpec& alg);

std::size_t count_distinct_outputs(const AlgorithmSpec& alg);

}  // namespace membound
