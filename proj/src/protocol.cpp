#include "membound/protocol.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "membound/numfmt.hpp"
#include "membound/quantization.hpp"

namespace membound {

CapacityError::CapacityError(std::size_t round, std::size_t bits, std::size_t capacity)
  : std::runtime_error("round " + std::to_string(round) + ": encoder returned " + std::to_string(bits) +
                       " bits, capacity is " + std::to_string(capacity))
  , round_{round} {}

namespace {

void check_point(const Point& x, std::size_t d, const std::string& what) {
    if (static_cast<std::size_t>(x.size()) != d) {
        throw InvalidQueryError(what + ": expected dimension " + std::to_string(d) + ", got " +
                                std::to_string(x.size()));
    }
    if (!x.allFinite()) {
        throw InvalidQueryError(what + ": non-finite coordinate");
    }
}

}  // namespace

Transcript run(const AlgorithmSpec& alg, const ConvexInstance& f) {
    if (alg.dimension != f.dimension()) {
        throw std::invalid_argument("run: algorithm dimension " + std::to_string(alg.dimension) +
                                    " differs from instance dimension " + std::to_string(f.dimension()));
    }
    if (alg.horizon == 0 || !alg.decode || !alg.encode || !alg.output) {
        throw std::invalid_argument("run: incomplete algorithm specification");
    }

    Transcript tr;
    tr.instance = f.token();
    tr.dimension = alg.dimension;
    tr.memory_budget = alg.memory_budget;
    tr.horizon = alg.horizon;
    tr.params = alg.params;
    tr.rounds.reserve(alg.horizon);

    MemoryState memory = MemoryState::blank(alg.memory_budget);
    for (std::size_t t = 1; t <= alg.horizon; ++t) {
        Point x = alg.decode(t, memory);
        check_point(x, alg.dimension, "round " + std::to_string(t) + " decoder");
        FirstOrderReply reply = f.query(x);
        MemoryState next = alg.encode(t, memory, reply);
        if (next.size() > alg.memory_budget) {
            throw CapacityError(t, next.size(), alg.memory_budget);
        }
        next.capacity = alg.memory_budget;
        tr.peak_memory_bits = std::max(tr.peak_memory_bits, next.size());
        memory = next;
        tr.rounds.push_back(RoundRecord{t, std::move(x), std::move(reply), std::move(next)});
    }
    tr.output = alg.output(memory);
    check_point(tr.output, alg.dimension, "output map");
    tr.suboptimality = f.suboptimality(tr.output);
    return tr;
}

std::string serialize_transcript(const Transcript& tr) {
    std::ostringstream os;
    os << "transcript v1\n";
    os << "d=" << tr.dimension << " L=" << format_double(tr.params.lipschitz)
       << " B=" << format_double(tr.params.radius) << " eps=" << format_double(tr.params.eps)
       << " M=" << tr.memory_budget << " T=" << tr.horizon << " seed=" << tr.params.seed << '\n';
    os << "instance " << tr.instance << '\n';
    for (const auto& r : tr.rounds) {
        os << "round " << r.t << ' ' << format_point(r.query, " ") << ' ' << format_double(r.reply.value) << ' '
           << r.memory.size() << '\n';
    }
    os << "output " << format_point(tr.output, " ") << '\n';
    os << "subopt " << (tr.suboptimality ? format_double(*tr.suboptimality) : std::string("unavailable"))
       << '\n';
    return os.str();
}

void write_transcript(const Transcript& tr, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open transcript file " + path.string());
    }
    out << serialize_transcript(tr);
    if (!out) {
        throw std::runtime_error("failed writing transcript file " + path.string());
    }
}

OutputEnumeration enumerate_outputs(const AlgorithmSpec& alg) {
    const std::size_t m = alg.memory_budget;
    if (m > kMaxEnumerationBits) {
        throw std::invalid_argument("enumerate_outputs: M = " + std::to_string(m) + " exceeds the " +
                                    std::to_string(kMaxEnumerationBits) + "-bit enumeration budget");
    }
    auto less = [](const Point& a, const Point& b) {
        return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
    };
    std::set<Point, decltype(less)> seen(less);
    OutputEnumeration result;
    const std::uint64_t n_states = std::uint64_t{1} << m;
    for (std::uint64_t s = 0; s < n_states; ++s) {
        const MemoryState state{m, BitString::from_integer(s, static_cast<unsigned>(m))};
        Point x;
        try {
            x = alg.output(state);
        } catch (const DomainError&) {
            ++result.rejected_states;
            continue;
        }
        check_point(x, alg.dimension, "output map");
        if (seen.insert(x).second) {
            result.points.push_back(x);
        }
    }
    return result;
}

std::size_t count_distinct_outputs(const AlgorithmSpec& alg) { return enumerate_outputs(alg).points.size(); }

}  // namespace membound
