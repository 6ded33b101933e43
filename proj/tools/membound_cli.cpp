#include <cmath>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "membound/algorithms.hpp"
#include "membound/experiments.hpp"
#include "membound/instances.hpp"
#include "membound/numfmt.hpp"
#include "membound/protocol.hpp"
#include "membound/verifier.hpp"

using namespace membound;

namespace {

template <typename T, typename Parse>
std::vector<T> parse_list(const std::string& text, Parse parse) {
    std::vector<T> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) {
            out.push_back(parse(item));
        }
    }
    if (out.empty()) {
        throw std::invalid_argument("empty list '" + text + "'");
    }
    return out;
}

AlgorithmSpec cardinality_algorithm(const std::string& kind, std::size_t d, double eps,
                                    const std::vector<ConvexInstance>& family, std::size_t bits) {
    if (kind == "constant") {
        return make_constant_output(d, bits);
    }
    if (kind == "table") {
        std::vector<Point> table;
        for (std::size_t i = 0; i < std::min(std::size_t{1} << bits, family.size()); ++i) {
            table.push_back(family[i].optimum()->point);
        }
        return make_lookup_table(table, bits, eps);
    }
    if (kind == "coarse-gd") {
        // Two bits per axis: M = 2d.
        return make_iterate_only_gd(d, 1.0, 1.0, static_cast<std::size_t>(std::ceil(gd_min_horizon(1.0, 1.0, eps))),
                                    1.0);
    }
    throw std::invalid_argument("unknown --alg for cardinality: " + kind);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Memory-bounded first-order convex optimization: runs, sweeps and lower-bound checks"};
    app.require_subcommand(1);

    // run
    auto* run_cmd = app.add_subcommand("run", "Run one algorithm on one instance");
    std::string alg_name;
    std::size_t d = 2;
    double eps = 0.1;
    std::string instance_token;
    std::uint64_t seed = 0;
    std::string transcript_path;
    run_cmd->add_option("--alg", alg_name, "gd or com")->required()->check(CLI::IsMember({"gd", "com"}));
    run_cmd->add_option("--d", d, "dimension")->required();
    run_cmd->add_option("--eps", eps, "target accuracy")->required();
    run_cmd->add_option("--instance", instance_token, "instance token, e.g. dist:d=2:c=0.5,0")->required();
    run_cmd->add_option("--seed", seed, "master seed")->required();
    run_cmd->add_option("--transcript", transcript_path, "write the transcript here");

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "Tradeoff sweep to CSV");
    std::string d_list_text;
    std::string eps_list_text;
    std::string algs_text;
    std::string out_path;
    double query_const = 1.0;
    sweep_cmd->add_option("--d", d_list_text, "comma-separated dimensions")->required();
    sweep_cmd->add_option("--eps", eps_list_text, "comma-separated accuracies")->required();
    sweep_cmd->add_option("--algs", algs_text, "comma-separated algorithms (gd,com)")->required();
    sweep_cmd->add_option("--seed", seed, "master seed")->required();
    sweep_cmd->add_option("--out", out_path, "CSV output path")->required();
    sweep_cmd->add_option("--query-bound-const", query_const, "c in T >= c d log2(1/eps)");

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "Run a lower-bound or Grunbaum check");
    std::string check;
    double radius = 1.0;
    double alpha = 0.5;
    std::size_t budget = 1000000;
    std::size_t probes = 100000;
    std::size_t trials = 50;
    std::size_t d_min = 2;
    std::size_t d_max = 6;
    std::size_t samples = 100000;
    std::size_t bits = 4;
    std::size_t family_size = 25;
    std::string card_alg = "table";
    bool csv = false;
    verify_cmd->add_option("--check", check, "grunbaum|packing|separation|cardinality")
        ->required()
        ->check(CLI::IsMember({"grunbaum", "packing", "separation", "cardinality"}));
    verify_cmd->add_option("--seed", seed, "master seed")->required();
    verify_cmd->add_option("--d", d, "dimension (packing, separation, cardinality)");
    verify_cmd->add_option("--eps", eps, "accuracy (separation, cardinality)");
    verify_cmd->add_option("--B", radius, "ball radius (packing)");
    verify_cmd->add_option("--alpha", alpha, "separation distance (packing)");
    verify_cmd->add_option("--budget", budget, "maximum packing size (packing)");
    verify_cmd->add_option("--probes", probes, "probe points (separation)");
    verify_cmd->add_option("--trials", trials, "random bodies (grunbaum)");
    verify_cmd->add_option("--d-min", d_min, "smallest dimension (grunbaum)");
    verify_cmd->add_option("--d-max", d_max, "largest dimension (grunbaum)");
    verify_cmd->add_option("--samples", samples, "samples per estimate (grunbaum)");
    verify_cmd->add_option("--bits", bits, "memory budget M (cardinality)");
    verify_cmd->add_option("--family-size", family_size, "hard family size N (separation, cardinality)");
    verify_cmd->add_option("--alg", card_alg, "constant|table|coarse-gd (cardinality)");
    verify_cmd->add_flag("--csv", csv, "print the report as a CSV row");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) {
            const ConvexInstance f = parse_instance_token(instance_token);
            const AlgorithmSpec alg = make_algorithm(parse_alg_kind(alg_name), d, eps, seed);
            const Transcript tr = run(alg, f);
            if (!transcript_path.empty()) {
                write_transcript(tr, transcript_path);
            }
            std::cout << "alg=" << alg.name << " d=" << d << " eps=" << format_double(eps) << " T=" << alg.horizon
                      << " M=" << alg.memory_budget << " peak_bits=" << tr.peak_memory_bits
                      << " output=" << format_point(tr.output) << " subopt="
                      << (tr.suboptimality ? format_double(*tr.suboptimality) : std::string("unavailable"))
                      << '\n';
            return 0;
        }
        if (*sweep_cmd) {
            const auto ds = parse_list<std::size_t>(d_list_text, [](const std::string& s) {
                return static_cast<std::size_t>(std::stoul(s));
            });
            const auto epss = parse_list<double>(eps_list_text, [](const std::string& s) { return parse_double(s); });
            const auto algs = parse_list<AlgKind>(algs_text, [](const std::string& s) { return parse_alg_kind(s); });
            CellOptions opts;
            opts.query_bound_const = query_const;
            sweep(ds, epss, algs, seed, out_path, opts);
            std::cout << "wrote " << out_path << '\n';
            return 0;
        }
        CheckReport report;
        if (check == "packing") {
            report = verify_packing_bound(d, radius, alpha, budget);
        } else if (check == "separation") {
            report = verify_separation(make_hard_family(d, eps, 1.0, 1.0, family_size), eps, probes, seed);
        } else if (check == "cardinality") {
            const auto family = make_hard_family(d, eps, 1.0, 1.0, family_size);
            report = verify_cardinality_bound(cardinality_algorithm(card_alg, d, eps, family, bits), family, eps,
                                              seed);
        } else {
            GrunbaumOptions opts;
            opts.trials = trials;
            opts.d_min = d_min;
            opts.d_max = d_max;
            opts.n_samples = samples;
            report = verify_grunbaum(opts, seed);
        }
        if (csv) {
            std::cout << CheckReport::csv_header() << '\n' << report.to_csv_row() << '\n';
        } else {
            std::cout << report.to_text();
        }
        return report.status == CheckStatus::fail ? 1 : 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
