#include "membound/instances.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "membound/geometry.hpp"
#include "membound/numfmt.hpp"

namespace membound {

namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = text.find(sep, start);
        if (pos == std::string_view::npos) {
            parts.push_back(text.substr(start));
            return parts;
        }
        parts.push_back(text.substr(start, pos - start));
        start = pos + 1;
    }
}

Point parse_vector(std::string_view text) {
    const auto parts = split(text, ',');
    Point x(static_cast<Eigen::Index>(parts.size()));
    for (std::size_t i = 0; i < parts.size(); ++i) {
        x[static_cast<Eigen::Index>(i)] = parse_double(parts[i]);
    }
    return x;
}

std::size_t parse_size(std::string_view text) {
    const double v = parse_double(text);
    if (v < 0 || v != std::floor(v)) {
        throw std::invalid_argument("expected a non-negative integer, got '" + std::string(text) + "'");
    }
    return static_cast<std::size_t>(v);
}

Point fixed_unit_direction(Eigen::Index d) {
    return Point::Constant(d, 1.0 / std::sqrt(static_cast<double>(d)));
}

}  // namespace

std::string_view to_string(SelectorMode mode) {
    switch (mode) {
        case SelectorMode::standard: return "standard";
        case SelectorMode::max_norm: return "max-norm";
        case SelectorMode::fixed_direction: return "fixed-direction";
        case SelectorMode::kink_worst: return "kink-worst";
    }
    return "standard";
}

SelectorMode parse_selector_mode(std::string_view text) {
    for (auto mode : {SelectorMode::standard, SelectorMode::max_norm, SelectorMode::fixed_direction,
                      SelectorMode::kink_worst}) {
        if (text == to_string(mode)) {
            return mode;
        }
    }
    throw std::invalid_argument("unknown selector mode '" + std::string(text) + "'");
}

ConvexInstance ConvexInstance::custom(std::size_t d, double lipschitz, double radius, Evaluator f, Selector g,
                                      std::optional<Optimum> optimum, std::string label) {
    if (d == 0 || !(lipschitz >= 0.0) || !(radius > 0.0) || !f || !g) {
        throw std::invalid_argument("ConvexInstance::custom: invalid arguments");
    }
    ConvexInstance inst;
    inst.kind_ = Kind::custom;
    inst.dimension_ = d;
    inst.lipschitz_ = lipschitz;
    inst.radius_ = radius;
    inst.value_bound_ = 2.0 * lipschitz * radius;
    inst.optimum_ = std::move(optimum);
    inst.evaluator_ = std::move(f);
    inst.custom_selector_ = std::move(g);
    inst.label_ = std::move(label);
    return inst;
}

double ConvexInstance::value(const Point& x) const {
    switch (kind_) {
        case Kind::distance: return lipschitz_ * (x - center_).norm();
        case Kind::max_affine: return (slopes_ * x + offsets_).maxCoeff();
        case Kind::custom: return evaluator_(x);
    }
    return 0.0;
}

std::vector<Eigen::Index> ConvexInstance::active_pieces(const Point& x) const {
    std::vector<Eigen::Index> active;
    if (kind_ != Kind::max_affine) {
        return active;
    }
    const Eigen::VectorXd v = slopes_ * x + offsets_;
    const double top = v.maxCoeff();
    const double tol = 1e-12 * (1.0 + std::abs(top));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (v[i] >= top - tol) {
            active.push_back(i);
        }
    }
    return active;
}

Point ConvexInstance::distance_subgradient(const Point& x) const {
    const Point diff = x - center_;
    const double r = diff.norm();
    const auto d = static_cast<Eigen::Index>(dimension_);
    if (r > 0.0) {
        return lipschitz_ * diff / r;
    }
    switch (selector_) {
        case SelectorMode::standard: return Point::Zero(d);
        case SelectorMode::max_norm: return lipschitz_ * Point::Unit(d, 0);
        case SelectorMode::fixed_direction: return lipschitz_ * fixed_unit_direction(d);
        case SelectorMode::kink_worst: {
            // -x/|x| makes the step x - eta g move outward, away from the origin.
            const double n = x.norm();
            return n > 0.0 ? Point(-lipschitz_ * x / n) : Point(lipschitz_ * Point::Unit(d, 0));
        }
    }
    return Point::Zero(d);
}

Point ConvexInstance::max_affine_subgradient(const Point& x) const {
    if (selector_ == SelectorMode::standard) {
        Eigen::Index best = 0;
        (slopes_ * x + offsets_).maxCoeff(&best);
        return slopes_.row(best).transpose();
    }
    const auto active = active_pieces(x);
    const auto d = static_cast<Eigen::Index>(dimension_);
    auto score = [&](Eigen::Index i) -> double {
        const Point a = slopes_.row(i).transpose();
        switch (selector_) {
            case SelectorMode::max_norm: return a.norm();
            case SelectorMode::fixed_direction: return a.dot(fixed_unit_direction(d));
            case SelectorMode::kink_worst: return -a.dot(x);
            case SelectorMode::standard: break;
        }
        return 0.0;
    };
    Eigen::Index pick = active.front();
    double pick_score = score(pick);
    for (auto i : active) {
        const double s = score(i);
        if (s > pick_score) {
            pick = i;
            pick_score = s;
        }
    }
    return slopes_.row(pick).transpose();
}

Point ConvexInstance::subgradient(const Point& x) const {
    switch (kind_) {
        case Kind::distance: return distance_subgradient(x);
        case Kind::max_affine: return max_affine_subgradient(x);
        case Kind::custom: return custom_selector_(x);
    }
    return Point::Zero(static_cast<Eigen::Index>(dimension_));
}

FirstOrderReply ConvexInstance::query(const Point& x) const {
    if (static_cast<std::size_t>(x.size()) != dimension_) {
        throw std::invalid_argument("ConvexInstance::query: dimension mismatch");
    }
    return FirstOrderReply{value(x), subgradient(x)};
}

std::optional<double> ConvexInstance::suboptimality(const Point& x) const {
    if (!optimum_) {
        return std::nullopt;
    }
    return value(x) - optimum_->value;
}

std::string ConvexInstance::token() const {
    std::string out;
    if (!label_.empty()) {
        out = label_;
    } else if (kind_ == Kind::distance) {
        out = "dist:d=" + std::to_string(dimension_) + ":L=" + format_double(lipschitz_) +
              ":B=" + format_double(radius_) + ":c=" + format_point(center_);
    } else if (kind_ == Kind::max_affine) {
        out = "maxaff:d=" + std::to_string(dimension_) + ":B=" + format_double(radius_) + ":a=";
        for (Eigen::Index i = 0; i < slopes_.rows(); ++i) {
            if (i > 0) {
                out += ';';
            }
            out += format_point(slopes_.row(i).transpose());
        }
        out += ":b=" + format_point(offsets_);
    }
    if (selector_ != SelectorMode::standard) {
        out += ":sel=";
        out += to_string(selector_);
    }
    return out;
}

ConvexInstance make_distance_instance(const Point& center, double lipschitz, double radius) {
    if (center.size() == 0 || !center.allFinite()) {
        throw std::invalid_argument("make_distance_instance: center must be finite and non-empty");
    }
    if (!(lipschitz > 0.0) || !std::isfinite(lipschitz) || !(radius > 0.0)) {
        throw std::invalid_argument("make_distance_instance: need L > 0 and B > 0");
    }
    ConvexInstance inst;
    inst.kind_ = ConvexInstance::Kind::distance;
    inst.dimension_ = static_cast<std::size_t>(center.size());
    inst.lipschitz_ = lipschitz;
    inst.radius_ = std::max(radius, center.norm());
    inst.value_bound_ = 2.0 * lipschitz * inst.radius_;
    inst.center_ = center;
    inst.optimum_ = Optimum{center, 0.0};
    return inst;
}

Optimum solve_max_affine(const Eigen::MatrixXd& slopes, const Eigen::VectorXd& offsets, double radius,
                         std::size_t max_subsets) {
    const Eigen::Index n = slopes.rows();
    const Eigen::Index d = slopes.cols();
    auto value = [&](const Point& x) { return (slopes * x + offsets).maxCoeff(); };

    Optimum best{Point::Zero(d), value(Point::Zero(d))};
    auto consider = [&](const Point& x) {
        if (!x.allFinite() || x.norm() > radius * (1.0 + 1e-12)) {
            return;
        }
        const double v = value(x);
        if (v < best.value) {
            best = Optimum{x, v};
        }
    };

    const Eigen::Index max_k = std::min<Eigen::Index>(n, d + 1);
    double subsets = 0.0;
    for (Eigen::Index k = 1; k <= max_k; ++k) {
        double c = 1.0;
        for (Eigen::Index j = 0; j < k; ++j) {
            c = c * static_cast<double>(n - j) / static_cast<double>(j + 1);
        }
        subsets += c;
    }

    if (subsets > static_cast<double>(max_subsets)) {
        // Reference solve: projected subgradient with best-iterate tracking.
        Point x = Point::Zero(d);
        const std::size_t iters = 400000;
        for (std::size_t t = 1; t <= iters; ++t) {
            Eigen::Index i = 0;
            (slopes * x + offsets).maxCoeff(&i);
            const Point g = slopes.row(i).transpose();
            x -= (radius / std::sqrt(static_cast<double>(t))) * g / std::max(g.norm(), 1e-300);
            if (x.norm() > radius) {
                x *= radius / x.norm();
            }
            consider(x);
        }
        return best;
    }

    std::vector<Eigen::Index> subset;
    std::function<void(Eigen::Index)> recurse = [&](Eigen::Index next) {
        if (!subset.empty()) {
            const auto k = static_cast<Eigen::Index>(subset.size());
            const Point a0 = slopes.row(subset[0]).transpose();
            Point p = Point::Zero(d);
            Point v = a0;
            bool ok = true;
            if (k > 1) {
                Eigen::MatrixXd C(k - 1, d);
                Eigen::VectorXd e(k - 1);
                for (Eigen::Index r = 1; r < k; ++r) {
                    C.row(r - 1) = slopes.row(subset[r]) - slopes.row(subset[0]);
                    e[r - 1] = offsets[subset[0]] - offsets[subset[r]];
                }
                Eigen::JacobiSVD<Eigen::MatrixXd> svd(C, Eigen::ComputeFullU | Eigen::ComputeFullV);
                svd.setThreshold(1e-12);
                p = svd.solve(e);
                ok = (C * p - e).norm() <= 1e-9 * (1.0 + e.norm());
                const Eigen::Index rank = svd.rank();
                const Eigen::MatrixXd null_basis = svd.matrixV().rightCols(d - rank);
                v = null_basis * (null_basis.transpose() * a0);
            }
            if (ok && p.norm() <= radius) {
                consider(p);
                const double vn = v.norm();
                if (vn > 1e-12 * (1.0 + a0.norm())) {
                    const double r = std::sqrt(std::max(0.0, radius * radius - p.squaredNorm()));
                    consider(p - r * v / vn);
                }
            }
        }
        if (static_cast<Eigen::Index>(subset.size()) == max_k) {
            return;
        }
        for (Eigen::Index i = next; i < n; ++i) {
            subset.push_back(i);
            recurse(i + 1);
            subset.pop_back();
        }
    };
    recurse(0);
    return best;
}

ConvexInstance make_max_affine_instance(const std::vector<Point>& slopes, const std::vector<double>& offsets,
                                        double radius) {
    if (slopes.empty()) {
        throw std::invalid_argument("make_max_affine_instance: no pieces");
    }
    if (slopes.size() != offsets.size()) {
        throw std::invalid_argument("make_max_affine_instance: slopes/offsets length mismatch");
    }
    if (!(radius > 0.0)) {
        throw std::invalid_argument("make_max_affine_instance: radius must be positive");
    }
    const Eigen::Index d = slopes.front().size();
    if (d == 0) {
        throw std::invalid_argument("make_max_affine_instance: empty slope vector");
    }
    ConvexInstance inst;
    inst.kind_ = ConvexInstance::Kind::max_affine;
    inst.dimension_ = static_cast<std::size_t>(d);
    inst.radius_ = radius;
    inst.slopes_.resize(static_cast<Eigen::Index>(slopes.size()), d);
    inst.offsets_.resize(static_cast<Eigen::Index>(offsets.size()));
    double lipschitz = 0.0;
    double bound = 0.0;
    for (std::size_t i = 0; i < slopes.size(); ++i) {
        if (slopes[i].size() != d || !slopes[i].allFinite() || !std::isfinite(offsets[i])) {
            throw std::invalid_argument("make_max_affine_instance: malformed piece");
        }
        inst.slopes_.row(static_cast<Eigen::Index>(i)) = slopes[i].transpose();
        inst.offsets_[static_cast<Eigen::Index>(i)] = offsets[i];
        lipschitz = std::max(lipschitz, slopes[i].norm());
        bound = std::max(bound, slopes[i].norm() * radius + std::abs(offsets[i]));
    }
    inst.lipschitz_ = lipschitz;
    inst.value_bound_ = std::max(2.0 * lipschitz * radius, bound);
    inst.optimum_ = solve_max_affine(inst.slopes_, inst.offsets_, radius);
    return inst;
}

ConvexInstance adversarial_subgradient_selector(const ConvexInstance& base, SelectorMode mode) {
    if (base.kind() == ConvexInstance::Kind::custom) {
        throw std::invalid_argument("adversarial_subgradient_selector: instance exposes no subdifferential");
    }
    ConvexInstance out = base;
    out.selector_ = mode;
    return out;
}

std::vector<ConvexInstance> make_hard_family(std::size_t d, double eps, double lipschitz, double radius,
                                             std::size_t budget) {
    if (!(eps > 0.0) || eps > lipschitz * radius / 2.0) {
        throw std::invalid_argument("make_hard_family: need 0 < eps <= LB/2");
    }
    const PackingSet packing = greedy_packing(d, radius, 2.0 * eps / lipschitz, budget);
    std::vector<ConvexInstance> family;
    family.reserve(packing.points.size());
    for (const auto& p : packing.points) {
        family.push_back(make_distance_instance(p, lipschitz, radius));
    }
    return family;
}

std::vector<ConvexInstance> standard_corpus(std::size_t d, std::uint64_t seed, double lipschitz,
                                            double radius) {
    if (d == 0) {
        throw std::invalid_argument("standard_corpus: dimension must be positive");
    }
    std::vector<ConvexInstance> corpus;
    const auto dim = static_cast<Eigen::Index>(d);
    const std::string prefix = "corpus:d=" + std::to_string(d) + ":seed=" + std::to_string(seed) + ":i=";
    for (int i = 0; i < 5; ++i) {
        Rng rng = Rng(seed).split(static_cast<std::uint64_t>(100 * d + i));
        const std::size_t pieces = d + 4;
        std::vector<Point> a(pieces);
        std::vector<double> b(pieces);
        for (std::size_t j = 0; j < pieces; ++j) {
            const double scale = rng.uniform(0.3, 1.0);
            a[j] = lipschitz * scale * rng.direction(dim);
            b[j] = rng.uniform(-0.5, 0.5) * lipschitz * radius;
        }
        // Shift so F* = 0; values on the ball then lie in [0, 2LB].
        const double f_star = make_max_affine_instance(a, b, radius).optimum()->value;
        for (auto& bj : b) {
            bj -= f_star;
        }
        ConvexInstance inst = make_max_affine_instance(a, b, radius);
        inst.label_ = prefix + std::to_string(i);
        corpus.push_back(std::move(inst));
    }
    for (int i = 5; i < 10; ++i) {
        Rng rng = Rng(seed).split(static_cast<std::uint64_t>(100 * d + i));
        ConvexInstance inst = make_distance_instance(rng.in_ball(dim, radius), lipschitz, radius);
        inst.label_ = prefix + std::to_string(i);
        corpus.push_back(std::move(inst));
    }
    return corpus;
}

ConvexInstance parse_instance_token(std::string_view token) {
    const auto parts = split(token, ':');
    const std::string_view kind = parts.front();
    std::map<std::string, std::string, std::less<>> fields;
    for (std::size_t i = 1; i < parts.size(); ++i) {
        const auto eq = parts[i].find('=');
        if (eq == std::string_view::npos) {
            throw std::invalid_argument("instance token: field without '=': '" + std::string(parts[i]) + "'");
        }
        fields.emplace(std::string(parts[i].substr(0, eq)), std::string(parts[i].substr(eq + 1)));
    }
    auto require = [&](const char* key) -> const std::string& {
        auto it = fields.find(key);
        if (it == fields.end()) {
            throw std::invalid_argument(std::string("instance token: missing field '") + key + "'");
        }
        return it->second;
    };
    auto number_or = [&](const char* key, double fallback) {
        auto it = fields.find(key);
        return it == fields.end() ? fallback : parse_double(it->second);
    };

    ConvexInstance inst = [&]() -> ConvexInstance {
        if (kind == "dist") {
            const std::size_t d = parse_size(require("d"));
            const Point c = parse_vector(require("c"));
            if (static_cast<std::size_t>(c.size()) != d) {
                throw std::invalid_argument("instance token: center length differs from d");
            }
            return make_distance_instance(c, number_or("L", 1.0), number_or("B", 1.0));
        }
        if (kind == "maxaff") {
            const std::size_t d = parse_size(require("d"));
            std::vector<Point> slopes;
            for (auto row : split(require("a"), ';')) {
                slopes.push_back(parse_vector(row));
                if (static_cast<std::size_t>(slopes.back().size()) != d) {
                    throw std::invalid_argument("instance token: slope length differs from d");
                }
            }
            const Point b = parse_vector(require("b"));
            std::vector<double> offsets(b.data(), b.data() + b.size());
            return make_max_affine_instance(slopes, offsets, number_or("B", 1.0));
        }
        if (kind == "corpus") {
            const std::size_t d = parse_size(require("d"));
            const std::size_t i = parse_size(require("i"));
            const auto seed = static_cast<std::uint64_t>(std::stoull(require("seed")));
            auto corpus = standard_corpus(d, seed);
            if (i >= corpus.size()) {
                throw std::invalid_argument("instance token: corpus index out of range");
            }
            return corpus[i];
        }
        throw std::invalid_argument("instance token: unknown kind '" + std::string(kind) + "'");
    }();

    if (auto it = fields.find("sel"); it != fields.end()) {
        inst = adversarial_subgradient_selector(inst, parse_selector_mode(it->second));
    }
    return inst;
}

}  // namespace membound
