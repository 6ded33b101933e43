#include "membound/geometry.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace membound {

CutSet::CutSet(std::size_t dimension, double radius)
  : dimension_{dimension}
  , radius_{radius} {
    if (dimension == 0 || !(radius > 0.0)) {
        throw std::invalid_argument("CutSet: need positive dimension and radius");
    }
}

void CutSet::add_cut(Point normal, Point anchor) {
    if (static_cast<std::size_t>(normal.size()) != dimension_ ||
        static_cast<std::size_t>(anchor.size()) != dimension_) {
        throw std::invalid_argument("CutSet::add_cut: dimension mismatch");
    }
    cuts_.push_back(Cut{std::move(normal), std::move(anchor)});
}

bool CutSet::contains(const Point& x) const {
    if (x.norm() > radius_) {
        return false;
    }
    for (const auto& cut : cuts_) {
        if (cut.normal.dot(x - cut.anchor) > 0.0) {
            return false;
        }
    }
    return true;
}

Point CutSet::default_start() const {
    if (cuts_.empty()) {
        return Point::Zero(static_cast<Eigen::Index>(dimension_));
    }
    return cuts_.back().anchor;
}

HitAndRun::HitAndRun(const CutSet& body, Point start, std::uint64_t seed)
  : radius_{body.radius()}
  , normals_(static_cast<Eigen::Index>(body.cuts().size()), static_cast<Eigen::Index>(body.dimension()))
  , offsets_(static_cast<Eigen::Index>(body.cuts().size()))
  , x_{std::move(start)}
  , rng_{seed}
  , max_failures_{50 * body.dimension()} {
    if (static_cast<std::size_t>(x_.size()) != body.dimension()) {
        throw std::invalid_argument("HitAndRun: start point dimension mismatch");
    }
    for (std::size_t i = 0; i < body.cuts().size(); ++i) {
        const auto& cut = body.cuts()[i];
        normals_.row(static_cast<Eigen::Index>(i)) = cut.normal.transpose();
        offsets_[static_cast<Eigen::Index>(i)] = cut.normal.dot(cut.anchor);
    }
}

void HitAndRun::step() {
    const Eigen::Index d = x_.size();
    for (std::size_t failures = 0; failures < max_failures_; ++failures) {
        const Point u = rng_.direction(d);

        // Ball: |x + l u|^2 <= R^2.
        const double b = x_.dot(u);
        const double c = x_.squaredNorm() - radius_ * radius_;
        const double disc = b * b - c;
        if (!(disc > 0.0)) {
            continue;
        }
        const double root = std::sqrt(disc);
        double lo = -b - root;
        double hi = -b + root;

        // Cuts: l <n, u> <= offset - <n, x>.
        if (normals_.rows() > 0) {
            const Eigen::VectorXd rate = normals_ * u;
            const Eigen::VectorXd slack = offsets_ - normals_ * x_;
            for (Eigen::Index i = 0; i < rate.size(); ++i) {
                if (rate[i] > 0.0) {
                    hi = std::min(hi, slack[i] / rate[i]);
                } else if (rate[i] < 0.0) {
                    lo = std::max(lo, slack[i] / rate[i]);
                } else if (slack[i] < 0.0) {
                    hi = lo;
                }
            }
        }
        if (!(hi > lo)) {
            continue;
        }
        x_ += rng_.uniform(lo, hi) * u;
        return;
    }
    throw DegenerateBodyError("hit-and-run: no interior chord after " + std::to_string(max_failures_) +
                              " consecutive proposals");
}

Point estimate_centroid(const CutSet& body, std::uint64_t seed, const SamplerOptions& opts) {
    if (opts.n_samples == 0) {
        throw std::invalid_argument("estimate_centroid: n_samples must be positive");
    }
    HitAndRun walk(body, body.default_start(), seed);
    const std::size_t burn = opts.effective_burn_in(body.dimension());
    for (std::size_t i = 0; i < burn; ++i) {
        walk.step();
    }
    Point sum = Point::Zero(static_cast<Eigen::Index>(body.dimension()));
    for (std::size_t i = 0; i < opts.n_samples; ++i) {
        walk.step();
        sum += walk.current();
    }
    return sum / static_cast<double>(opts.n_samples);
}

double estimate_volume_fraction(const CutSet& body, const Halfspace& h, std::uint64_t seed,
                                const SamplerOptions& opts) {
    if (opts.n_samples == 0) {
        throw std::invalid_argument("estimate_volume_fraction: n_samples must be positive");
    }
    HitAndRun walk(body, body.default_start(), seed);
    const std::size_t burn = opts.effective_burn_in(body.dimension());
    for (std::size_t i = 0; i < burn; ++i) {
        walk.step();
    }
    std::size_t inside = 0;
    for (std::size_t i = 0; i < opts.n_samples; ++i) {
        walk.step();
        if (h.contains(walk.current())) {
            ++inside;
        }
    }
    return static_cast<double>(inside) / static_cast<double>(opts.n_samples);
}

PackingSet greedy_packing(std::size_t d, double radius, double alpha, std::size_t budget) {
    if (d == 0 || !(radius > 0.0)) {
        throw std::invalid_argument("greedy_packing: need positive dimension and radius");
    }
    if (!(alpha > 0.0) || alpha >= 2.0 * radius) {
        throw std::invalid_argument("greedy_packing: need 0 < alpha < 2B");
    }
    PackingSet out{{}, alpha};
    if (budget == 0) {
        return out;
    }
    const double h = alpha / std::sqrt(static_cast<double>(d));
    const auto m = static_cast<long long>(std::floor(radius / h));
    std::vector<long long> idx(d, -m);
    const auto dim = static_cast<Eigen::Index>(d);
    Point p(dim);
    for (;;) {
        for (std::size_t i = 0; i < d; ++i) {
            p[static_cast<Eigen::Index>(i)] = static_cast<double>(idx[i]) * h;
        }
        if (p.norm() <= radius) {
            bool admit = true;
            for (const auto& q : out.points) {
                if ((p - q).norm() <= alpha) {
                    admit = false;
                    break;
                }
            }
            if (admit) {
                out.points.push_back(p);
                if (out.points.size() >= budget) {
                    return out;
                }
            }
        }
        // Odometer with the first coordinate most significant.
        std::size_t axis = d;
        while (axis > 0) {
            --axis;
            if (idx[axis] < m) {
                ++idx[axis];
                break;
            }
            idx[axis] = -m;
            if (axis == 0) {
                return out;
            }
        }
    }
}

double min_pairwise_distance(const std::vector<Point>& points) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            best = std::min(best, (points[i] - points[j]).norm());
        }
    }
    return best;
}

}  // namespace membound
