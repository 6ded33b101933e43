#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "membound/rng.hpp"

namespace membound {

/// What the first-order oracle returns at a query point.
struct FirstOrderReply {
    double value;
    Point subgradient;
};

/// Which element of the subdifferential the oracle hands out.
enum class SelectorMode { standard, max_norm, fixed_direction, kink_worst };

std::string_view to_string(SelectorMode mode);
SelectorMode parse_selector_mode(std::string_view text);

struct Optimum {
    Point point;
    double value;
};

/// A convex Lipschitz function over R^d with a pluggable subgradient
/// selector. Immutable once built; value() and subgradient() are pure.
class ConvexInstance {
  public:
    enum class Kind { distance, max_affine, custom };

    using Evaluator = std::function<double(const Point&)>;
    using Selector = std::function<Point(const Point&)>;

    /// A black-box instance with no subdifferential structure. Used for tests
    /// of the harness; adversarial selectors reject it.
    static ConvexInstance custom(std::size_t d, double lipschitz, double radius, Evaluator f, Selector g,
                                 std::optional<Optimum> optimum = std::nullopt, std::string label = "custom");

    Kind kind() const { return kind_; }
    std::size_t dimension() const { return dimension_; }
    double lipschitz() const { return lipschitz_; }
    /// Radius of the ball that holds the optimum and over which F* is taken.
    double radius() const { return radius_; }
    /// |F| <= value_bound on the query ball.
    double value_bound() const { return value_bound_; }
    const std::optional<Optimum>& optimum() const { return optimum_; }
    SelectorMode selector() const { return selector_; }

    double value(const Point& x) const;
    Point subgradient(const Point& x) const;
    FirstOrderReply query(const Point& x) const;

    /// F(x) - F*, or nullopt without a known optimum.
    std::optional<double> suboptimality(const Point& x) const;

    /// Compact text token, e.g. "dist:d=2:L=1:B=1:c=0.5,0".
    std::string token() const;

    // Structure of distance instances.
    const Point& center() const { return center_; }
    // Structure of max-affine instances.
    const Eigen::MatrixXd& slopes() const { return slopes_; }
    const Eigen::VectorXd& offsets() const { return offsets_; }

    /// Indices of pieces attaining the max at x within a relative 1e-12.
    std::vector<Eigen::Index> active_pieces(const Point& x) const;

  private:
    friend ConvexInstance make_distance_instance(const Point&, double, double);
    friend ConvexInstance make_max_affine_instance(const std::vector<Point>&, const std::vector<double>&,
                                                   double);
    friend ConvexInstance adversarial_subgradient_selector(const ConvexInstance&, SelectorMode);
    friend std::vector<ConvexInstance> standard_corpus(std::size_t, std::uint64_t, double, double);

    ConvexInstance() = default;

    Point distance_subgradient(const Point& x) const;
    Point max_affine_subgradient(const Point& x) const;

    Kind kind_ = Kind::custom;
    std::size_t dimension_ = 0;
    double lipschitz_ = 0.0;
    double radius_ = 1.0;
    double value_bound_ = 0.0;
    std::optional<Optimum> optimum_;
    SelectorMode selector_ = SelectorMode::standard;

    Point center_;
    Eigen::MatrixXd slopes_;
    Eigen::VectorXd offsets_;

    Evaluator evaluator_;
    Selector custom_selector_;
    std::string label_;
};

/// F(x) = L ||x - center||; subgradient 0 at the kink. The optimum radius is
/// max(radius, ||center||).
ConvexInstance make_distance_instance(const Point& center, double lipschitz, double radius = 1.0);

/// F(x) = max_i <a_i, x> + b_i with L = max ||a_i||; F* over the radius ball
/// computed at construction.
ConvexInstance make_max_affine_instance(const std::vector<Point>& slopes, const std::vector<double>& offsets,
                                        double radius = 1.0);

/// Same function, different valid subgradient choice.
ConvexInstance adversarial_subgradient_selector(const ConvexInstance& base, SelectorMode mode);

/// Distance instances over greedy_packing(d, B, 2 eps / L, budget).
std::vector<ConvexInstance> make_hard_family(std::size_t d, double eps, double lipschitz, double radius,
                                             std::size_t budget);

/// Minimizer of a max-affine function over the ball of `radius`: candidate
/// enumeration over active sets (the minimizer satisfies the equal-value
/// system of its active pieces and is either its min-norm point or the best
/// point of that affine set on the sphere). Falls back to a long projected
/// subgradient run when the number of active sets exceeds `max_subsets`.
Optimum solve_max_affine(const Eigen::MatrixXd& slopes, const Eigen::VectorXd& offsets, double radius,
                         std::size_t max_subsets = 200000);

/// Five max-affine instances shifted to F* = 0 followed by five distance
/// instances, all with L <= lipschitz and optimum inside the radius ball.
std::vector<ConvexInstance> standard_corpus(std::size_t d, std::uint64_t seed, double lipschitz = 1.0,
                                            double radius = 1.0);

/// Inverse of ConvexInstance::token(); also accepts "corpus:d=D:seed=S:i=I"
/// for a standard_corpus member. Throws std::invalid_argument.
ConvexInstance parse_instance_token(std::string_view token);

}  // namespace membound
