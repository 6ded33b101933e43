#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "membound/rng.hpp"

namespace membound {

/// The sampler could not find an interior point; the body is empty or
/// degenerate.
class DegenerateBodyError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// The halfspace {x : <normal, x - anchor> <= 0}.
struct Cut {
    Point normal;
    Point anchor;
};

/// A ball of radius B intersected with cutting halfspaces.
class CutSet {
  public:
    CutSet(std::size_t dimension, double radius);

    std::size_t dimension() const { return dimension_; }
    double radius() const { return radius_; }
    const std::vector<Cut>& cuts() const { return cuts_; }

    void add_cut(Point normal, Point anchor);

    bool contains(const Point& x) const;

    /// Where a fresh walk starts: the anchor of the newest cut (the previous
    /// centroid, which lies in the body) or the origin when uncut.
    Point default_start() const;

  private:
    std::size_t dimension_;
    double radius_;
    std::vector<Cut> cuts_;
};

/// {x : <normal, x - anchor> >= 0}. A zero normal is the whole space.
struct Halfspace {
    Point normal;
    Point anchor;

    bool contains(const Point& x) const { return normal.dot(x - anchor) >= 0.0; }
};

struct SamplerOptions {
    std::size_t n_samples = 2000;
    /// 0 selects 100 * d.
    std::size_t burn_in = 0;

    std::size_t effective_burn_in(std::size_t d) const { return burn_in == 0 ? 100 * d : burn_in; }
};

/// Hit-and-run walk on a CutSet: uniform direction, then a uniform point on
/// the chord through the current point.
class HitAndRun {
  public:
    HitAndRun(const CutSet& body, Point start, std::uint64_t seed);

    /// One transition; throws DegenerateBodyError after 50 d consecutive
    /// zero-length chords.
    void step();

    const Point& current() const { return x_; }

  private:
    double radius_;
    Eigen::MatrixXd normals_;
    Eigen::VectorXd offsets_;
    Point x_;
    Rng rng_;
    std::size_t max_failures_;
};

/// Mean of n_samples hit-and-run states after burn-in, started from
/// body.default_start(). Bit-identical for equal arguments.
Point estimate_centroid(const CutSet& body, std::uint64_t seed, const SamplerOptions& opts = {});

/// Fraction of hit-and-run states falling in h.
double estimate_volume_fraction(const CutSet& body, const Halfspace& h, std::uint64_t seed,
                                const SamplerOptions& opts = {});

struct PackingSet {
    std::vector<Point> points;
    double separation;
};

/// Greedy scan of the cubic lattice of spacing alpha/sqrt(d) inside the ball,
/// lexicographic order, admitting a point iff it is farther than alpha from
/// every admitted point. Stops after `budget` points.
PackingSet greedy_packing(std::size_t d, double radius, double alpha, std::size_t budget);

/// Smallest pairwise distance, +inf for fewer than two points.
double min_pairwise_distance(const std::vector<Point>& points);

}  // namespace membound
