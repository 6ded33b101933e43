#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "membound/algorithms.hpp"

namespace membound {

enum class AlgKind { gd, com };

std::string_view to_string(AlgKind kind);
AlgKind parse_alg_kind(std::string_view text);

/// Centroid sample budget: $MEMBOUND_SAMPLES when set to a positive integer, else 2000.
std::size_t default_centroid_samples();

struct CellOptions {
    /// 0 selects default_centroid_samples().
    std::size_t centroid_samples = 0;
    /// c in the query lower bound T >= c d log2(1/eps).
    double query_bound_const = 1.0;
};

/// The algorithm run_cell and the CLI use: L = B = 1 and the default horizons and codecs.
AlgorithmSpec make_algorithm(AlgKind kind, std::size_t d, double eps, std::uint64_t seed,
                             const CellOptions& opts = {});

/// One row of the tradeoff table. Measured rows carry M, T, suboptimality and
/// pass; bound rows carry the theoretical M or T only.
struct TradeoffRecord {
    std::size_t d = 0;
    double eps = 0.0;
    std::string alg;
    std::optional<double> memory_bits;
    std::optional<double> queries;
    std::optional<double> suboptimality;
    std::optional<bool> pass;
    std::string label;
    /// Why a measured cell failed, empty otherwise. Not part of the CSV.
    std::string error;
};

/// Worst suboptimality over standard_corpus(d, seed) and the measured (T, M).
/// pass iff worst suboptimality <= 3 eps. Errors mark the cell failed.
TradeoffRecord run_cell(std::size_t d, double eps, AlgKind kind, std::uint64_t seed, const CellOptions& opts = {});

/// T >= c d log2(1/eps).
TradeoffRecord query_bound_row(std::size_t d, double eps, double c);
/// M >= d log2(1/(2 eps)).
TradeoffRecord memory_bound_row(std::size_t d, double eps);

/// Rows in (d, eps) order; per cell, one row per algorithm in list order then
/// the query and memory bound rows.
std::vector<TradeoffRecord> sweep_records(const std::vector<std::size_t>& d_list, const std::vector<double>& eps_list,
                                          const std::vector<AlgKind>& algs, std::uint64_t seed,
                                          const CellOptions& opts = {});

inline constexpr std::string_view kSweepCsvHeader = "d,eps,alg,M_bits,T_queries,subopt,pass,label";

std::string to_csv(const std::vector<TradeoffRecord>& records);

void sweep(const std::vector<std::size_t>& d_list, const std::vector<double>& eps_list,
           const std::vector<AlgKind>& algs, std::uint64_t seed, const std::filesystem::path& out_path,
           const CellOptions& opts = {});

}  // namespace membound
