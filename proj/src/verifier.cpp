#include "membound/verifier.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "membound/geometry.hpp"
#include "membound/numfmt.hpp"

namespace membound {

std::string_view to_string(CheckStatus status) {
    switch (status) {
        case CheckStatus::pass: return "pass";
        case CheckStatus::fail: return "fail";
        case CheckStatus::refused: return "refused";
        case CheckStatus::not_binding: return "bound not binding";
    }
    return "refused";
}

std::string CheckReport::to_text() const {
    std::ostringstream os;
    os << name << ": " << to_string(status) << '\n';
    for (const auto& [k, v] : parameters) {
        os << "  param " << k << " = " << v << '\n';
    }
    for (const auto& [k, v] : measured) {
        os << "  measured " << k << " = " << format_double(v) << '\n';
    }
    if (!bound.empty()) {
        os << "  bound " << bound << '\n';
    }
    if (!counterexample.empty()) {
        os << "  counterexample " << counterexample << '\n';
    }
    if (!note.empty()) {
        os << "  note " << note << '\n';
    }
    return os.str();
}

std::string CheckReport::csv_header() { return "check,status,parameters,measured,bound,counterexample,note"; }

std::string CheckReport::to_csv_row() const {
    auto quote = [](const std::string& s) {
        std::string out = "\"";
        for (char c : s) {
            if (c == '"') {
                out += '"';
            }
            out += c;
        }
        return out + "\"";
    };
    std::string params;
    for (const auto& [k, v] : parameters) {
        params += (params.empty() ? "" : ";") + k + "=" + v;
    }
    std::string meas;
    for (const auto& [k, v] : measured) {
        meas += (meas.empty() ? "" : ";") + k + "=" + format_double(v);
    }
    return quote(name) + "," + quote(std::string(to_string(status))) + "," + quote(params) + "," + quote(meas) +
           "," + quote(bound) + "," + quote(counterexample) + "," + quote(note);
}

CheckReport verify_packing_bound(std::size_t d, double radius, double alpha, std::size_t budget) {
    CheckReport r;
    r.name = "packing";
    r.parameters = {{"d", std::to_string(d)},
                    {"B", format_double(radius)},
                    {"alpha", format_double(alpha)},
                    {"budget", std::to_string(budget)}};
    const double bound = std::pow(radius / alpha, static_cast<double>(d));
    r.bound = "size >= (B/alpha)^d = " + format_double(bound);
    if (d == 0 || d > 4) {
        r.status = CheckStatus::refused;
        r.note = "dimension outside 1..4";
        return r;
    }
    const PackingSet packing = greedy_packing(d, radius, alpha, budget);
    const double gap = min_pairwise_distance(packing.points);
    double max_norm = 0.0;
    for (const auto& p : packing.points) {
        max_norm = std::max(max_norm, p.norm());
    }
    r.measured = {{"size", static_cast<double>(packing.points.size())},
                  {"min_pairwise_distance", gap},
                  {"max_norm", max_norm}};
    if (static_cast<double>(packing.points.size()) < bound) {
        r.status = CheckStatus::fail;
        r.counterexample = "packing of size " + std::to_string(packing.points.size()) + " below " +
                           format_double(bound);
    } else if (!(gap > alpha) || max_norm > radius) {
        r.status = CheckStatus::fail;
        r.counterexample = "packing invariant broken: min gap " + format_double(gap) + ", max norm " +
                           format_double(max_norm);
    } else {
        r.status = CheckStatus::pass;
    }
    return r;
}

CheckReport verify_separation(const std::vector<ConvexInstance>& family, double eps, std::size_t n_probes,
                              std::uint64_t seed) {
    CheckReport r;
    r.name = "separation";
    r.parameters = {{"family_size", std::to_string(family.size())},
                    {"eps", format_double(eps)},
                    {"probes", std::to_string(n_probes)},
                    {"seed", std::to_string(seed)}};
    r.bound = "f_i(x) <= eps implies f_j(x) > eps for all j != i";
    if (family.size() < 2) {
        r.status = CheckStatus::refused;
        r.note = "need at least two instances";
        return r;
    }
    std::vector<Point> optima;
    double lipschitz = 0.0;
    double radius = 0.0;
    for (const auto& f : family) {
        if (!f.optimum()) {
            r.status = CheckStatus::refused;
            r.note = "instance without known optimum: " + f.token();
            return r;
        }
        optima.push_back(f.optimum()->point);
        lipschitz = std::max(lipschitz, f.lipschitz());
        radius = std::max(radius, f.radius());
    }
    const double gap = min_pairwise_distance(optima);
    r.measured.emplace_back("min_optimum_gap", gap);
    if (!(gap > 2.0 * eps / lipschitz)) {
        r.status = CheckStatus::refused;
        r.note = "optima not more than 2 eps / L apart; construction precondition violated";
        return r;
    }

    const auto d = static_cast<Eigen::Index>(family.front().dimension());
    Rng rng(seed);
    std::size_t hits = 0;
    auto probe = [&](const Point& x) -> bool {
        std::size_t solved_by = family.size();
        for (std::size_t i = 0; i < family.size(); ++i) {
            if (*family[i].suboptimality(x) <= eps) {
                if (solved_by != family.size()) {
                    r.counterexample = "x = (" + format_point(x) + ") is eps-optimal for members " +
                                       std::to_string(solved_by) + " and " + std::to_string(i);
                    return false;
                }
                solved_by = i;
            }
        }
        if (solved_by != family.size()) {
            ++hits;
        }
        return true;
    };
    for (const auto& x : optima) {
        if (!probe(x)) {
            r.status = CheckStatus::fail;
            return r;
        }
    }
    for (std::size_t k = 0; k < n_probes; ++k) {
        if (!probe(rng.in_ball(d, radius))) {
            r.status = CheckStatus::fail;
            return r;
        }
    }
    r.measured.emplace_back("probes_solving_one_member", static_cast<double>(hits));
    r.status = CheckStatus::pass;
    return r;
}

CheckReport verify_cardinality_bound(const AlgorithmSpec& alg, const std::vector<ConvexInstance>& family,
                                     double eps, std::uint64_t seed, std::size_t n_probes) {
    CheckReport r;
    r.name = "cardinality";
    r.parameters = {{"algorithm", alg.name},
                    {"M", std::to_string(alg.memory_budget)},
                    {"family_size", std::to_string(family.size())},
                    {"eps", format_double(eps)},
                    {"seed", std::to_string(seed)}};
    r.bound = "an M-bit algorithm has at most 2^M outputs, so it fails on some member when 2^M < N";
    if (alg.memory_budget > kMaxEnumerationBits) {
        r.status = CheckStatus::refused;
        r.note = "M exceeds the enumeration budget of " + std::to_string(kMaxEnumerationBits) + " bits";
        return r;
    }
    const double states = std::ldexp(1.0, static_cast<int>(alg.memory_budget));
    r.measured.emplace_back("states", states);
    if (states >= static_cast<double>(family.size())) {
        r.status = CheckStatus::not_binding;
        return r;
    }
    const CheckReport sep = verify_separation(family, eps, n_probes, seed);
    if (!sep.passed()) {
        r.status = CheckStatus::refused;
        r.note = "family is not separated: " + std::string(to_string(sep.status)) + " " + sep.counterexample +
                 sep.note;
        return r;
    }

    const OutputEnumeration outputs = enumerate_outputs(alg);
    r.measured.emplace_back("distinct_outputs", static_cast<double>(outputs.points.size()));
    std::size_t covered = 0;
    std::size_t uncovered = family.size();
    for (std::size_t i = 0; i < family.size(); ++i) {
        bool solved = false;
        for (const auto& p : outputs.points) {
            if (*family[i].suboptimality(p) <= eps) {
                solved = true;
                break;
            }
        }
        if (solved) {
            ++covered;
        } else if (uncovered == family.size()) {
            uncovered = i;
        }
    }
    r.measured.emplace_back("members_solvable_by_some_output", static_cast<double>(covered));
    if (uncovered == family.size()) {
        r.status = CheckStatus::fail;
        r.counterexample = "every member is solved by one of the " + std::to_string(outputs.points.size()) +
                           " outputs";
        return r;
    }

    const Transcript tr = run(alg, family[uncovered]);
    const double subopt = *tr.suboptimality;
    r.measured.emplace_back("failing_member", static_cast<double>(uncovered));
    r.measured.emplace_back("failing_suboptimality", subopt);
    r.note = "member " + std::to_string(uncovered) + " (" + family[uncovered].token() + ")";
    if (subopt > eps) {
        r.status = CheckStatus::pass;
    } else {
        r.status = CheckStatus::fail;
        r.counterexample = "run() on member " + std::to_string(uncovered) + " reached suboptimality " +
                           format_double(subopt);
    }
    return r;
}

std::pair<double, double> grunbaum_band(double p, std::size_t n) {
    const double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
    const double inv_e = 1.0 / std::numbers::e;
    return {inv_e - 3.0 * sigma, 1.0 - inv_e + 3.0 * sigma};
}

CheckReport verify_grunbaum(const GrunbaumOptions& opts, std::uint64_t seed) {
    CheckReport r;
    r.name = "grunbaum";
    r.parameters = {{"trials", std::to_string(opts.trials)},
                    {"d_min", std::to_string(opts.d_min)},
                    {"d_max", std::to_string(opts.d_max)},
                    {"max_cuts", std::to_string(opts.max_cuts)},
                    {"n_samples", std::to_string(opts.n_samples)},
                    {"seed", std::to_string(seed)}};
    r.bound = "1/e - 3 sigma <= vol(K n H)/vol(K) <= 1 - 1/e + 3 sigma";
    if (opts.d_min == 0 || opts.d_max < opts.d_min || opts.d_max > 8 || opts.trials == 0) {
        r.status = CheckStatus::refused;
        r.note = "need 1 <= d_min <= d_max <= 8 and trials >= 1";
        return r;
    }
    const SamplerOptions sampler{opts.n_samples, 0};
    double lowest = 1.0;
    double highest = 0.0;
    std::size_t degenerate = 0;
    std::size_t completed = 0;
    for (std::size_t trial = 0; trial < opts.trials; ++trial) {
        Rng rng(derive_seed(seed, trial));
        const std::size_t d = opts.d_min + static_cast<std::size_t>(rng.uniform() * static_cast<double>(
                                                                                        opts.d_max - opts.d_min + 1));
        const auto n_cuts = static_cast<std::size_t>(rng.uniform() * static_cast<double>(opts.max_cuts + 1));
        const auto dim = static_cast<Eigen::Index>(d);
        try {
            CutSet body(d, 1.0);
            for (std::size_t j = 0; j < n_cuts; ++j) {
                HitAndRun walk(body, body.default_start(), rng.split(j).seed());
                for (std::size_t s = 0; s < 20 * d; ++s) {
                    walk.step();
                }
                body.add_cut(rng.direction(dim), walk.current());
            }
            const Point c = estimate_centroid(body, rng.split(1000).seed(), sampler);
            const Halfspace h{rng.direction(dim), c};
            const double p = estimate_volume_fraction(body, h, rng.split(2000).seed(), sampler);
            lowest = std::min(lowest, p);
            highest = std::max(highest, p);
            ++completed;
            const auto [lo, hi] = grunbaum_band(p, opts.n_samples);
            if (p < lo || p > hi) {
                r.status = CheckStatus::fail;
                r.counterexample = "trial " + std::to_string(trial) + " (d=" + std::to_string(d) + ", " +
                                   std::to_string(n_cuts) + " cuts): fraction " + format_double(p) +
                                   " outside [" + format_double(lo) + ", " + format_double(hi) + "]";
                break;
            }
        } catch (const DegenerateBodyError&) {
            ++degenerate;
        }
    }
    r.measured = {{"completed", static_cast<double>(completed)},
                  {"degenerate", static_cast<double>(degenerate)},
                  {"min_fraction", lowest},
                  {"max_fraction", highest}};
    if (r.status != CheckStatus::fail) {
        r.status = completed > 0 ? CheckStatus::pass : CheckStatus::refused;
    }
    if (degenerate > 0) {
        r.note = std::to_string(degenerate) + " degenerate bodies skipped";
    }
    return r;
}

CheckReport grunbaum_negative_control(std::size_t d, double offset, std::size_t n_samples, std::uint64_t seed) {
    CheckReport r;
    r.name = "grunbaum-negative-control";
    r.parameters = {{"d", std::to_string(d)},
                    {"offset", format_double(offset)},
                    {"n_samples", std::to_string(n_samples)},
                    {"seed", std::to_string(seed)}};
    r.bound = "an off-centre cut should leave the Grunbaum band";
    const auto dim = static_cast<Eigen::Index>(d);
    const CutSet ball(d, 1.0);
    const SamplerOptions sampler{n_samples, 0};
    const Point c = estimate_centroid(ball, derive_seed(seed, 1), sampler);
    const Point normal = Point::Unit(dim, 0);
    const Halfspace h{normal, c + offset * normal};
    const double p = estimate_volume_fraction(ball, h, derive_seed(seed, 2), sampler);
    const auto [lo, hi] = grunbaum_band(p, n_samples);
    r.measured = {{"fraction", p}, {"band_lo", lo}, {"band_hi", hi}};
    if (p < lo || p > hi) {
        r.status = CheckStatus::pass;
    } else {
        r.status = CheckStatus::fail;
        r.counterexample = "off-centre fraction " + format_double(p) + " stayed inside the band";
    }
    return r;
}

}  // namespace membound
