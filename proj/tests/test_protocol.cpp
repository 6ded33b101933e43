#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "membound/algorithms.hpp"
#include "membound/numfmt.hpp"
#include "membound/protocol.hpp"

using namespace membound;

namespace {

Point vec(std::initializer_list<double> v) {
    Point p(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) {
        p[i++] = x;
    }
    return p;
}

// Writes its M-bit counter of rounds, queries the origin.
AlgorithmSpec counter(std::size_t d, std::size_t m, std::size_t horizon) {
    AlgorithmSpec alg;
    alg.name = "counter";
    alg.dimension = d;
    alg.memory_budget = m;
    alg.horizon = horizon;
    alg.decode = [d](std::size_t, const MemoryState&) { return Point(Point::Zero(static_cast<Eigen::Index>(d))); };
    alg.encode = [m](std::size_t t, const MemoryState& s, const FirstOrderReply&) {
        return MemoryState{s.capacity, BitString::from_integer(t % (1ULL << m), static_cast<unsigned>(m))};
    };
    alg.output = [d](const MemoryState&) { return Point(Point::Zero(static_cast<Eigen::Index>(d))); };
    return alg;
}

}  // namespace

TEST_CASE("null algorithm on ||x|| has suboptimality 0") {
    const auto f = make_distance_instance(Point::Zero(2), 1.0);
    const auto tr = run(make_constant_output(2, 0), f);
    REQUIRE(tr.suboptimality);
    CHECK(*tr.suboptimality == 0.0);
    CHECK(tr.peak_memory_bits == 0);
    CHECK(tr.rounds.size() == 1);
}

TEST_CASE("GD on ||x|| queries the origin every round") {
    const auto f = make_distance_instance(Point::Zero(2), 1.0);
    GDConfig cfg;
    cfg.dimension = 2;
    const auto tr = run(make_gd(cfg), f);
    CHECK(tr.rounds.size() == 900);
    for (const auto& r : tr.rounds) {
        REQUIRE(r.query.isZero(0.0));
    }
    CHECK(*tr.suboptimality == 0.0);
}

TEST_CASE("the harness records every round with its memory") {
    const auto f = make_distance_instance(vec({0.5}), 1.0);
    const auto tr = run(counter(1, 3, 5), f);
    REQUIRE(tr.rounds.size() == 5);
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(tr.rounds[i].t == i + 1);
        CHECK(tr.rounds[i].memory.bits.read(0, 3) == (i + 1) % 8);
        CHECK(tr.rounds[i].reply.value == doctest::Approx(0.5));
    }
    CHECK(tr.peak_memory_bits == 3);
}

TEST_CASE("capacity violations name the round") {
    auto alg = counter(1, 3, 5);
    alg.encode = [](std::size_t t, const MemoryState& s, const FirstOrderReply&) {
        return MemoryState{s.capacity, BitString(t)};
    };
    const auto f = make_distance_instance(vec({0.5}), 1.0);
    try {
        run(alg, f);
        FAIL("expected CapacityError");
    } catch (const CapacityError& e) {
        CHECK(e.round() == 4);
    }
}

TEST_CASE("invalid queries are rejected") {
    const auto f = make_distance_instance(vec({0.5, 0.0}), 1.0);
    auto alg = counter(2, 2, 3);
    alg.decode = [](std::size_t t, const MemoryState&) {
        return t == 2 ? vec({std::nan(""), 0.0}) : vec({0.0, 0.0});
    };
    CHECK_THROWS_AS(run(alg, f), InvalidQueryError);
    alg = counter(2, 2, 3);
    alg.decode = [](std::size_t, const MemoryState&) { return vec({0.0}); };
    CHECK_THROWS_AS(run(alg, f), InvalidQueryError);
    alg = counter(2, 2, 3);
    alg.output = [](const MemoryState&) { return vec({INFINITY, 0.0}); };
    CHECK_THROWS_AS(run(alg, f), InvalidQueryError);
    CHECK_THROWS(run(counter(3, 2, 3), f));
}

TEST_CASE("runs are deterministic and serialize byte-identically") {
    const auto f = parse_instance_token("corpus:d=2:seed=4:i=1");
    GDConfig cfg;
    cfg.dimension = 2;
    cfg.seed = 4;
    const auto a = serialize_transcript(run(make_gd(cfg), f));
    const auto b = serialize_transcript(run(make_gd(cfg), f));
    CHECK(a == b);
}

TEST_CASE("transcript text format") {
    const auto f = make_distance_instance(vec({0.5}), 1.0);
    GDConfig cfg;
    cfg.eps = 0.5;
    const auto tr = run(make_gd(cfg), f);
    const std::string text = serialize_transcript(tr);
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    CHECK(line == "transcript v1");
    std::getline(in, line);
    CHECK(line == "d=1 L=1 B=1 eps=0.5 M=" + std::to_string(tr.memory_budget) + " T=36 seed=0");
    std::getline(in, line);
    CHECK(line == "instance " + f.token());
    for (const auto& r : tr.rounds) {
        std::getline(in, line);
        std::istringstream row(line);
        std::string tag, x, v, bits;
        std::size_t t = 0;
        row >> tag >> t >> x >> v >> bits;
        CHECK(tag == "round");
        CHECK(t == r.t);
        CHECK(parse_double(x) == r.query[0]);
        CHECK(parse_double(v) == r.reply.value);
        CHECK(bits == std::to_string(r.memory.size()));
    }
    std::getline(in, line);
    CHECK(line == "output " + format_double(tr.output[0]));
    std::getline(in, line);
    CHECK(line == "subopt " + format_double(*tr.suboptimality));
    CHECK_FALSE(std::getline(in, line));

    Transcript blank = tr;
    blank.suboptimality.reset();
    CHECK(serialize_transcript(blank).ends_with("subopt unavailable\n"));
}

TEST_CASE("output enumeration") {
    CHECK(count_distinct_outputs(make_constant_output(2, 0)) == 1);
    CHECK(count_distinct_outputs(make_constant_output(2, 8)) == 1);
    // An output map that reads all 8 bits as a coordinate: exactly 256 distinct outputs.
    auto alg = counter(1, 8, 1);
    alg.output = [](const MemoryState& s) { return vec({static_cast<double>(s.bits.read(0, 8))}); };
    CHECK(count_distinct_outputs(alg) == 256);
    alg.output = [](const MemoryState& s) { return vec({static_cast<double>(s.bits.read(0, 8) % 200)}); };
    const auto e = enumerate_outputs(alg);
    CHECK(e.points.size() == 200);
    CHECK(e.rejected_states == 0);
    alg.memory_budget = 21;
    CHECK_THROWS(count_distinct_outputs(alg));
    // Iterate-only GD at d=1 with 3 bits: 7 codewords, one invalid pattern.
    const auto coarse = make_iterate_only_gd(1, 1.0, 1.0, 10, 0.25);
    const auto ce = enumerate_outputs(coarse);
    CHECK(ce.points.size() == 7);
    CHECK(ce.rejected_states == 1);
}
