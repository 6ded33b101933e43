#include "membound/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "membound/numfmt.hpp"

namespace membound {

namespace {

template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    const std::size_t workers = std::min<std::size_t>(n, std::max(1U, std::thread::hardware_concurrency()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            fn(i);
        }
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers) {
                fn(i);
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
}

}  // namespace

std::string_view to_string(AlgKind kind) { return kind == AlgKind::gd ? "gd" : "com"; }

AlgKind parse_alg_kind(std::string_view text) {
    if (text == "gd") {
        return AlgKind::gd;
    }
    if (text == "com") {
        return AlgKind::com;
    }
    throw std::invalid_argument("unknown algorithm '" + std::string(text) + "' (expected gd or com)");
}

std::size_t default_centroid_samples() {
    if (const char* env = std::getenv("MEMBOUND_SAMPLES")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) {
            return static_cast<std::size_t>(v);
        }
    }
    return 2000;
}

AlgorithmSpec make_algorithm(AlgKind kind, std::size_t d, double eps, std::uint64_t seed, const CellOptions& opts) {
    if (kind == AlgKind::gd) {
        GDConfig cfg;
        cfg.dimension = d;
        cfg.eps = eps;
        cfg.seed = seed;
        return make_gd(cfg);
    }
    CoMConfig cfg;
    cfg.dimension = d;
    cfg.eps = eps;
    cfg.seed = seed;
    cfg.sampler.n_samples = opts.centroid_samples == 0 ? default_centroid_samples() : opts.centroid_samples;
    return make_com(cfg);
}

TradeoffRecord run_cell(std::size_t d, double eps, AlgKind kind, std::uint64_t seed, const CellOptions& opts) {
    TradeoffRecord rec;
    rec.d = d;
    rec.eps = eps;
    rec.alg = std::string(to_string(kind));
    rec.label = kind == AlgKind::gd ? "GD-corner" : "CoM-corner";
    try {
        if (d == 0 || !(eps > 0.0) || eps > 0.5) {
            throw std::invalid_argument("run_cell: need d >= 1 and 0 < eps <= 1/2");
        }
        const AlgorithmSpec alg = make_algorithm(kind, d, eps, seed, opts);
        const auto corpus = standard_corpus(d, seed);
        std::vector<double> subopt(corpus.size(), 0.0);
        std::vector<std::size_t> peak(corpus.size(), 0);
        std::vector<std::string> errors(corpus.size());
        parallel_for(corpus.size(), [&](std::size_t i) {
            try {
                const Transcript tr = run(alg, corpus[i]);
                subopt[i] = *tr.suboptimality;
                peak[i] = tr.peak_memory_bits;
            } catch (const std::exception& e) {
                errors[i] = corpus[i].token() + ": " + e.what();
            }
        });
        for (const auto& e : errors) {
            if (!e.empty()) {
                throw std::runtime_error(e);
            }
        }
        const double worst = *std::max_element(subopt.begin(), subopt.end());
        rec.memory_bits = static_cast<double>(*std::max_element(peak.begin(), peak.end()));
        rec.queries = static_cast<double>(alg.horizon);
        rec.suboptimality = worst;
        rec.pass = worst <= 3.0 * eps;
    } catch (const std::exception& e) {
        rec.pass = false;
        rec.error = e.what();
    }
    return rec;
}

TradeoffRecord query_bound_row(std::size_t d, double eps, double c) {
    TradeoffRecord rec;
    rec.d = d;
    rec.eps = eps;
    rec.alg = "bound";
    rec.queries = c * static_cast<double>(d) * std::log2(1.0 / eps);
    rec.label = "lower-bound-query";
    return rec;
}

TradeoffRecord memory_bound_row(std::size_t d, double eps) {
    TradeoffRecord rec;
    rec.d = d;
    rec.eps = eps;
    rec.alg = "bound";
    rec.memory_bits = static_cast<double>(d) * std::log2(1.0 / (2.0 * eps));
    rec.label = "lower-bound-memory";
    return rec;
}

std::vector<TradeoffRecord> sweep_records(const std::vector<std::size_t>& d_list, const std::vector<double>& eps_list,
                                          const std::vector<AlgKind>& algs, std::uint64_t seed,
                                          const CellOptions& opts) {
    if (d_list.empty() || eps_list.empty() || algs.empty()) {
        throw std::invalid_argument("sweep: d, eps and algorithm lists must be non-empty");
    }
    std::vector<TradeoffRecord> rows;
    for (auto d : d_list) {
        for (auto eps : eps_list) {
            for (auto kind : algs) {
                rows.push_back(run_cell(d, eps, kind, seed, opts));
            }
            rows.push_back(query_bound_row(d, eps, opts.query_bound_const));
            rows.push_back(memory_bound_row(d, eps));
        }
    }
    return rows;
}

std::string to_csv(const std::vector<TradeoffRecord>& records) {
    auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
    std::ostringstream os;
    os << kSweepCsvHeader << '\n';
    for (const auto& r : records) {
        os << r.d << ',' << format_double(r.eps) << ',' << r.alg << ',' << opt(r.memory_bits) << ','
           << opt(r.queries) << ',' << opt(r.suboptimality) << ','
           << (r.pass ? (*r.pass ? "true" : "false") : "") << ',' << r.label << '\n';
    }
    return os.str();
}

void sweep(const std::vector<std::size_t>& d_list, const std::vector<double>& eps_list,
           const std::vector<AlgKind>& algs, std::uint64_t seed, const std::filesystem::path& out_path,
           const CellOptions& opts) {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open " + out_path.string() + " for writing");
    }
    out << to_csv(sweep_records(d_list, eps_list, algs, seed, opts));
    if (!out) {
        throw std::runtime_error("failed writing " + out_path.string());
    }
}

}  // namespace membound
