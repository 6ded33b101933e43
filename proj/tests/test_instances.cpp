#include <doctest.h>

#include <cmath>

#include "membound/instances.hpp"
#include "oracles.hpp"

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

std::vector<ConvexInstance> all_selector_variants(const std::vector<ConvexInstance>& base) {
    std::vector<ConvexInstance> out;
    for (const auto& f : base) {
        for (auto mode : {SelectorMode::standard, SelectorMode::max_norm, SelectorMode::fixed_direction,
                          SelectorMode::kink_worst}) {
            out.push_back(adversarial_subgradient_selector(f, mode));
        }
    }
    return out;
}

// Sampled convexity, Lipschitz and subgradient inequality checks.
void check_first_order_properties(const ConvexInstance& f, Rng& rng, int pairs) {
    const auto d = static_cast<Eigen::Index>(f.dimension());
    const double L = f.lipschitz();
    const double B = f.radius();
    for (int i = 0; i < pairs; ++i) {
        // Mix in kinks and piece ties, where selectors differ.
        Point x = rng.in_ball(d, B);
        if (i % 7 == 0 && f.kind() == ConvexInstance::Kind::distance) {
            x = f.center();
        }
        if (i % 11 == 0 && f.optimum()) {
            x = f.optimum()->point;
        }
        const Point y = rng.in_ball(d, B);
        const double fx = f.value(x);
        const double fy = f.value(y);
        const Point g = f.subgradient(x);
        const double scale = 1e-9 * (1.0 + std::abs(fx) + std::abs(fy));
        REQUIRE(g.norm() <= L * (1.0 + 1e-12));
        REQUIRE(fy >= fx + g.dot(y - x) - scale);
        REQUIRE(std::abs(fx - fy) <= L * (x - y).norm() + scale);
        const double lambda = rng.uniform();
        const Point z = lambda * x + (1.0 - lambda) * y;
        REQUIRE(f.value(z) <= lambda * fx + (1.0 - lambda) * fy + scale);
        REQUIRE(std::abs(fx) <= f.value_bound() + scale);
        if (f.optimum()) {
            REQUIRE(fx >= f.optimum()->value - scale);
        }
    }
}

}  // namespace

TEST_CASE("distance instance example") {
    const auto f = make_distance_instance(vec({0.5, 0.0}), 1.0);
    const auto r = f.query(vec({0.0, 0.0}));
    CHECK(r.value == doctest::Approx(0.5));
    CHECK(r.subgradient[0] == doctest::Approx(-1.0));
    CHECK(r.subgradient[1] == doctest::Approx(0.0));
    CHECK(f.optimum()->value == 0.0);
    CHECK(*f.suboptimality(vec({0.5, 0.0})) == 0.0);
    // Standard selector hands out zero at the kink.
    CHECK(f.subgradient(vec({0.5, 0.0})).isZero(0.0));
}

TEST_CASE("max-affine example: max(0.8x - 0.1, -x) on [-1, 1]") {
    const auto f = make_max_affine_instance({vec({0.8}), vec({-1.0})}, {-0.1, 0.0});
    CHECK(f.lipschitz() == 1.0);
    CHECK(f.optimum()->point[0] == doctest::Approx(1.0 / 18.0).epsilon(1e-9));
    CHECK(f.optimum()->value == doctest::Approx(-1.0 / 18.0).epsilon(1e-9));
    const double grid = oracle::grid_minimum([&](const oracle::Vec& x) { return f.value(x); }, 1, 1.0, 1e-5);
    CHECK(f.optimum()->value <= grid + 1e-12);
    CHECK(grid - f.optimum()->value <= 1e-5);
}

TEST_CASE("max-affine example: |x| = max(x, -x) has minimizer 0") {
    const auto f = make_max_affine_instance({vec({1.0}), vec({-1.0})}, {0.0, 0.0});
    CHECK(std::abs(f.optimum()->point[0]) < 1e-12);
    CHECK(std::abs(f.optimum()->value) < 1e-12);
    CHECK(f.active_pieces(vec({0.0})).size() == 2);
}

TEST_CASE("max-affine with a zero-slope piece") {
    const auto f = make_max_affine_instance({vec({0.0, 0.0}), vec({1.0, 0.0})}, {0.2, 0.0});
    CHECK(f.optimum()->value == doctest::Approx(0.2));
    CHECK(f.value(vec({-0.5, 0.3})) == doctest::Approx(0.2));
}

TEST_CASE("max-affine minimum on the sphere") {
    // max(<(1,1),x>, <(1,-1),x>) over the unit disk: minimizer (-1, 0), F* = -1.
    const auto f = make_max_affine_instance({vec({1.0, 1.0}), vec({1.0, -1.0})}, {0.0, 0.0});
    CHECK(f.optimum()->point[0] == doctest::Approx(-1.0));
    CHECK(std::abs(f.optimum()->point[1]) < 1e-9);
    CHECK(f.optimum()->value == doctest::Approx(-1.0));
}

TEST_CASE("solve_max_affine agrees with grid search on random instances") {
    Rng rng(31);
    for (std::size_t d : {1, 2}) {
        for (int rep = 0; rep < 12; ++rep) {
            const std::size_t pieces = 1 + static_cast<std::size_t>(rng.uniform() * 6);
            std::vector<Point> a;
            std::vector<double> b;
            for (std::size_t j = 0; j < pieces; ++j) {
                a.push_back(rng.uniform(0.1, 1.0) * rng.direction(static_cast<Eigen::Index>(d)));
                b.push_back(rng.uniform(-0.5, 0.5));
            }
            const auto f = make_max_affine_instance(a, b);
            const double h = d == 1 ? 1e-5 : 2e-3;
            const double grid =
                oracle::grid_minimum([&](const oracle::Vec& x) { return f.value(x); }, static_cast<int>(d), 1.0, h);
            CHECK(f.optimum()->point.norm() <= 1.0 + 1e-9);
            CHECK(f.value(f.optimum()->point) == doctest::Approx(f.optimum()->value).epsilon(1e-12));
            CHECK(f.optimum()->value <= grid + 1e-9);
            CHECK(grid - f.optimum()->value <= f.lipschitz() * h * std::sqrt(static_cast<double>(d)) + 1e-9);
        }
    }
}

TEST_CASE("solve_max_affine fallback matches enumeration") {
    Rng rng(8);
    for (int rep = 0; rep < 5; ++rep) {
        Eigen::MatrixXd A(6, 3);
        Eigen::VectorXd b(6);
        for (int j = 0; j < 6; ++j) {
            A.row(j) = rng.uniform(0.3, 1.0) * rng.direction(3).transpose();
            b[j] = rng.uniform(-0.5, 0.5);
        }
        const auto exact = solve_max_affine(A, b, 1.0);
        const auto approx = solve_max_affine(A, b, 1.0, 0);
        CHECK(approx.value >= exact.value - 1e-9);
        CHECK(approx.value - exact.value <= 1e-3);
    }
}

TEST_CASE("first-order properties hold on the corpus under every selector") {
    Rng rng(5);
    for (std::size_t d : {1, 2, 3, 5}) {
        const auto corpus = standard_corpus(d, 1);
        REQUIRE(corpus.size() == 10);
        for (const auto& f : all_selector_variants(corpus)) {
            check_first_order_properties(f, rng, 1000);
        }
    }
}

TEST_CASE("corpus members: F* = 0, optimum inside the ball, L <= 1") {
    for (std::size_t d : {1, 2, 4}) {
        for (const auto& f : standard_corpus(d, 3)) {
            CHECK(std::abs(f.optimum()->value) < 1e-9);
            CHECK(f.optimum()->point.norm() <= 1.0 + 1e-9);
            CHECK(f.lipschitz() <= 1.0 + 1e-12);
            CHECK(f.radius() == 1.0);
        }
    }
}

TEST_CASE("adversarial selectors at kinks") {
    const auto f = make_distance_instance(vec({0.2, -0.1}), 2.0);
    const Point c = f.center();
    const auto mx = adversarial_subgradient_selector(f, SelectorMode::max_norm);
    CHECK(mx.subgradient(c).norm() == doctest::Approx(2.0));
    const auto fd = adversarial_subgradient_selector(f, SelectorMode::fixed_direction);
    CHECK(fd.subgradient(c)[0] == doctest::Approx(fd.subgradient(c)[1]));
    const auto kw = adversarial_subgradient_selector(f, SelectorMode::kink_worst);
    // Points away from the origin, pushing the iterate outward.
    CHECK(kw.subgradient(c).dot(c) < 0.0);
    // Away from the kink every selector agrees with the gradient.
    const Point x = vec({0.7, 0.4});
    for (const auto& g : {mx, fd, kw}) {
        CHECK((g.subgradient(x) - f.subgradient(x)).norm() < 1e-12);
    }
    const auto custom = ConvexInstance::custom(
        1, 1.0, 1.0, [](const Point& x) { return std::abs(x[0]); }, [](const Point& x) { return Point(x.cwiseSign()); });
    CHECK_THROWS(adversarial_subgradient_selector(custom, SelectorMode::max_norm));
}

TEST_CASE("max-affine ties go to the chosen active piece") {
    const auto f = make_max_affine_instance({vec({1.0}), vec({-0.5})}, {0.0, 0.0});
    CHECK(f.subgradient(vec({0.0}))[0] == doctest::Approx(1.0));
    const auto neg = adversarial_subgradient_selector(f, SelectorMode::fixed_direction);
    CHECK(neg.subgradient(vec({0.0}))[0] == doctest::Approx(1.0));
    const auto mx = adversarial_subgradient_selector(f, SelectorMode::max_norm);
    CHECK(mx.subgradient(vec({0.0}))[0] == doctest::Approx(1.0));
}

TEST_CASE("selector mode names") {
    for (auto mode : {SelectorMode::standard, SelectorMode::max_norm, SelectorMode::fixed_direction,
                      SelectorMode::kink_worst}) {
        CHECK(parse_selector_mode(to_string(mode)) == mode);
    }
    CHECK_THROWS(parse_selector_mode("bogus"));
}

TEST_CASE("instance tokens round trip") {
    const auto f = parse_instance_token("dist:d=2:c=0.5,0");
    CHECK(f.kind() == ConvexInstance::Kind::distance);
    CHECK(f.center() == vec({0.5, 0.0}));
    Rng rng(40);
    std::vector<ConvexInstance> many = standard_corpus(3, 9);
    many.push_back(make_max_affine_instance({vec({0.1, 0.3}), vec({-1.0 / 3.0, 0.2})}, {0.7, -0.01}, 2.0));
    many.push_back(adversarial_subgradient_selector(make_distance_instance(vec({0.1, 0.2}), 1.5), SelectorMode::kink_worst));
    for (const auto& g : many) {
        const auto h = parse_instance_token(g.token());
        CHECK(h.token() == g.token());
        CHECK(h.selector() == g.selector());
        for (int i = 0; i < 100; ++i) {
            const Point x = rng.in_ball(static_cast<Eigen::Index>(g.dimension()), g.radius());
            CHECK(h.value(x) == g.value(x));
            CHECK(h.subgradient(x) == g.subgradient(x));
        }
    }
    const auto m = make_max_affine_instance({vec({0.1, 0.3}), vec({-1.0 / 3.0, 0.2})}, {0.7, -0.01}, 2.0);
    const auto mt = parse_instance_token(m.token());
    CHECK(mt.slopes() == m.slopes());
    CHECK(mt.offsets() == m.offsets());
    CHECK_THROWS(parse_instance_token("dist:d=2:c=0.5"));
    CHECK_THROWS(parse_instance_token("triangle:d=2"));
    CHECK_THROWS(parse_instance_token("corpus:d=2:seed=1:i=10"));
}

TEST_CASE("hard family: packing centres, pairwise gaps over 2 eps / L") {
    const double eps = 0.1;
    const auto family = make_hard_family(2, eps, 1.0, 1.0, 1000);
    CHECK(family.size() >= 25);
    for (std::size_t i = 0; i < family.size(); ++i) {
        CHECK(family[i].value(family[i].center()) == 0.0);
        for (std::size_t j = i + 1; j < family.size(); ++j) {
            CHECK((family[i].center() - family[j].center()).norm() > 2.0 * eps);
        }
    }
    CHECK_THROWS(make_hard_family(2, 0.6, 1.0, 1.0, 10));
}
