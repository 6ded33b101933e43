#include <doctest.h>

#include <cmath>
#include <numbers>

#include "membound/algorithms.hpp"
#include "membound/verifier.hpp"

using namespace membound;

namespace {

std::vector<ConvexInstance> family25() {
    auto family = make_hard_family(2, 0.1, 1.0, 1.0, 25);
    REQUIRE(family.size() == 25);
    return family;
}

double measured(const CheckReport& r, const std::string& key) {
    for (const auto& [k, v] : r.measured) {
        if (k == key) {
            return v;
        }
    }
    FAIL("missing measurement " << key);
    return 0.0;
}

}  // namespace

TEST_CASE("packing bound check") {
    CHECK(verify_packing_bound(2, 1.0, 0.5, 1000000).passed());
    CHECK(verify_packing_bound(4, 1.0, 0.25, 1000000).passed());
    CHECK(verify_packing_bound(5, 1.0, 0.5, 1000000).status == CheckStatus::refused);
    // A budget below (B/alpha)^d cannot meet the bound.
    const auto r = verify_packing_bound(2, 1.0, 0.25, 10);
    CHECK(r.status == CheckStatus::fail);
    CHECK_FALSE(r.counterexample.empty());
}

TEST_CASE("separation check") {
    CHECK(verify_separation(family25(), 0.1, 20000, 1).passed());
    // Two centres 0.1 apart at eps = 0.1 are not 2 eps / L separated.
    Point a(2), b(2);
    a << 0.0, 0.0;
    b << 0.1, 0.0;
    const std::vector<ConvexInstance> close{make_distance_instance(a, 1.0), make_distance_instance(b, 1.0)};
    CHECK(verify_separation(close, 0.1, 100, 1).status == CheckStatus::refused);
    CHECK(verify_separation({make_distance_instance(a, 1.0)}, 0.1, 100, 1).status != CheckStatus::pass);
}

TEST_CASE("cardinality check exhibits a failing instance for 4-bit algorithms") {
    const auto family = family25();
    std::vector<Point> table;
    for (std::size_t i = 0; i < 16; ++i) {
        table.push_back(family[i].optimum()->point);
    }
    for (const auto& alg : {make_constant_output(2, 4), make_lookup_table(table, 4, 0.1),
                            make_iterate_only_gd(2, 1.0, 1.0, 900, 1.0)}) {
        REQUIRE(alg.memory_budget <= 4);
        const auto r = verify_cardinality_bound(alg, family, 0.1, 7);
        CHECK(r.passed());
        CHECK(measured(r, "failing_suboptimality") > 0.1);
        CHECK(measured(r, "distinct_outputs") <= 16);
    }
}

TEST_CASE("cardinality check is not binding when 2^M >= N") {
    const auto family = family25();
    const auto r = verify_cardinality_bound(make_constant_output(2, 5), family, 0.1, 7);
    CHECK(r.status == CheckStatus::not_binding);
}

TEST_CASE("cardinality check with M = 0: the single output fails somewhere") {
    const auto family = family25();
    const auto r = verify_cardinality_bound(make_constant_output(2, 0), family, 0.1, 7);
    CHECK(r.passed());
}

TEST_CASE("Grunbaum band and small check") {
    const auto [lo, hi] = grunbaum_band(0.5, 10000);
    const double sigma = 0.005;
    CHECK(lo == doctest::Approx(1.0 / std::numbers::e - 3 * sigma));
    CHECK(hi == doctest::Approx(1.0 - 1.0 / std::numbers::e + 3 * sigma));
    GrunbaumOptions opts;
    opts.trials = 6;
    opts.d_max = 4;
    opts.max_cuts = 4;
    opts.n_samples = 20000;
    CHECK(verify_grunbaum(opts, 3).passed());
    CHECK(grunbaum_negative_control(2, 0.8, 20000, 3).passed());
    // A cut through the centroid is not an off-centre cut; the control must then fail.
    CHECK_FALSE(grunbaum_negative_control(2, 0.0, 20000, 3).passed());
}

TEST_CASE("report rendering") {
    const auto r = verify_packing_bound(2, 1.0, 0.5, 1000000);
    CHECK(r.to_text().starts_with("packing: pass"));
    CHECK(CheckReport::csv_header() == "check,status,parameters,measured,bound,counterexample,note");
    CHECK(r.to_csv_row().starts_with("\"packing\",\"pass\","));
}
