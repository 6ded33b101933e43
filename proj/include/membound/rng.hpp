#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace membound {

using Point = Eigen::VectorXd;

/// SplitMix64 finalizer; used to derive independent per-stream seeds.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seed for stream `stream` of a run seeded with `master`, e.g. the centroid
/// estimate of round t uses derive_seed(master, t).
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    return mix64(mix64(master) ^ mix64(stream + 0x632be59bd9b4e019ULL));
}

/// Seedable, splittable random stream.
class Rng {
  public:
    explicit Rng(std::uint64_t seed)
      : seed_{seed}
      , engine_{mix64(seed)} {}

    std::uint64_t seed() const { return seed_; }

    /// An independent child stream, a pure function of (seed, stream).
    Rng split(std::uint64_t stream) const { return Rng{derive_seed(seed_, stream)}; }

    /// Uniform on [0, 1).
    double uniform() { return std::generate_canonical<double, 64>(engine_); }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double normal() { return normal_(engine_); }

    /// Uniform on the unit sphere S^{d-1}.
    Point direction(Eigen::Index d) {
        Point u(d);
        double norm = 0.0;
        while (norm < 1e-12) {
            for (Eigen::Index i = 0; i < d; ++i) {
                u[i] = normal();
            }
            norm = u.norm();
        }
        return u / norm;
    }

    /// Uniform in the ball of radius r.
    Point in_ball(Eigen::Index d, double r) {
        const double radius = r * std::pow(uniform(), 1.0 / static_cast<double>(d));
        return radius * direction(d);
    }

  private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace membound
