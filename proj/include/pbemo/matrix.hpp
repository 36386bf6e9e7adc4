#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pbemo/config.hpp"
#include "pbemo/run.hpp"

namespace pbemo::harness {

/// One cell of the experiment table.
struct MatrixRow {
    std::string problem;
    std::size_t m = 0;
    std::string algorithm; ///< config label
    std::uint64_t seed = 0;
    std::optional<metrics::Accuracy> accuracy;
    std::string error;
};

struct MatrixResult {
    std::vector<MatrixRow> rows;           ///< config order, then seed
    std::vector<RunRecord> records;        ///< parallel to rows; empty for failed cells
    nlohmann::json summary;

    bool partial_failure() const;
    std::string csv() const;
};

/// Contents of a matrix config file:
/// {"configs": [RunConfig...], "repeats": n, "wilcoxon": bool}.
struct MatrixSpec {
    std::vector<RunConfig> configs;
    std::size_t repeats = 20;
    bool wilcoxon = true;
};

/// Unknown keys and invalid run configs raise ConfigError; field names of
/// nested errors are prefixed with "configs[i].".
MatrixSpec parse_matrix_spec(const nlohmann::json& j);

/// Worker count: PBEMO_WORKERS if set, else hardware concurrency.
std::size_t default_workers();

/// Runs every config with seeds 0..repeats-1 on a worker pool.
MatrixResult run_matrix(const std::vector<RunConfig>& configs, std::size_t repeats, std::size_t workers,
                        bool compare = true);

/// Per (problem, algorithm) mean/std, failures, and pairwise rank-sum tests
/// between algorithms on each problem when `compare`.
nlohmann::json summarize(const std::vector<MatrixRow>& rows, bool compare);

inline constexpr const char* csv_header = "problem,m,algorithm,seed,eps_star,eps_bar";

std::string to_csv(const std::vector<MatrixRow>& rows);
/// Rebuilds a row from a saved RunRecord.
MatrixRow row_from_record(const nlohmann::json& record);

} // namespace pbemo::harness
