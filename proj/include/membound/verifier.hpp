#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "membound/instances.hpp"
#include "membound/protocol.hpp"

namespace membound {

/// not_binding: the hypothesis that makes the bound bite does not hold, so
/// there is nothing to check. refused: a precondition of the check failed.
enum class CheckStatus { pass, fail, refused, not_binding };

std::string_view to_string(CheckStatus status);

struct CheckReport {
    std::string name;
    std::vector<std::pair<std::string, std::string>> parameters;
    CheckStatus status = CheckStatus::refused;
    std::vector<std::pair<std::string, double>> measured;
    std::string bound;
    /// Set whenever status == fail.
    std::string counterexample;
    std::string note;

    bool passed() const { return status == CheckStatus::pass; }
    std::string to_text() const;

    static std::string csv_header();
    /// name,status,parameters,measured,bound,counterexample,note; list-valued
    /// cells are ';'-joined key=value pairs.
    std::string to_csv_row() const;
};

/// greedy_packing size >= (B/alpha)^d. Refuses d > 4.
CheckReport verify_packing_bound(std::size_t d, double radius, double alpha, std::size_t budget);

/// Over the family optima and n_probes uniform points of the ball: whenever
/// f_i(x) - f_i* <= eps, every other member has f_j(x) - f_j* > eps.
/// Refuses when the optima are not more than 2 eps / L apart.
CheckReport verify_separation(const std::vector<ConvexInstance>& family, double eps, std::size_t n_probes,
                              std::uint64_t seed);

/// When 2^M < |family|, exhibits a member on which `alg` ends more than eps
/// suboptimal: enumerate the at most 2^M outputs, find a member none of them
/// solves, then confirm with run().
CheckReport verify_cardinality_bound(const AlgorithmSpec& alg, const std::vector<ConvexInstance>& family,
                                     double eps, std::uint64_t seed, std::size_t n_probes = 10000);

struct GrunbaumOptions {
    std::size_t trials = 50;
    std::size_t d_min = 2;
    std::size_t d_max = 6;
    std::size_t max_cuts = 10;
    std::size_t n_samples = 100000;
};

/// Random nested bodies, each cut through its estimated centroid along a
/// random normal; every retained fraction must lie in
/// [1/e - 3 sigma, 1 - 1/e + 3 sigma] with sigma the binomial deviation.
CheckReport verify_grunbaum(const GrunbaumOptions& opts, std::uint64_t seed);

/// Unit ball cut at `offset` from its estimated centroid. Passes when the
/// retained fraction leaves the Grunbaum band, i.e. the band test has power.
CheckReport grunbaum_negative_control(std::size_t d, double offset, std::size_t n_samples, std::uint64_t seed);

/// [1/e - 3 sigma, 1 - 1/e + 3 sigma] for an estimate p from n samples.
std::pair<double, double> grunbaum_band(double p, std::size_t n);

}  // namespace membound
