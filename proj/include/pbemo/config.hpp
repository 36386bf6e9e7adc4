#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "pbemo/problems.hpp"
#include "pbemo/types.hpp"

namespace pbemo::harness {

enum class Algorithm { pbnsga2, pbmoead, pbemo_dts };
enum class DmMode { simulated, interactive };

std::string to_string(Algorithm a);
std::string to_string(DmMode m);

/// One run. Unset optionals take defaults derived from the problem and DM mode.
struct RunConfig {
    std::string problem = "zdt1";
    Algorithm algorithm = Algorithm::pbnsga2;
    std::optional<std::size_t> k;                ///< subsets; default by m
    std::optional<std::size_t> budget;           ///< T; 100 simulated, 20 interactive
    double alpha = 0.6;
    double epsilon = 1e-3;                       ///< +inf disables consultation
    double consult_start = 0.5;                  ///< fraction of G before the first session
    std::optional<std::size_t> consult_interval; ///< default ceil(0.1 G)
    DmMode dm_mode = DmMode::simulated;
    double sigma_star = 0.1;
    bool stochastic_dm = true;
    std::optional<Vector> golden_point;          ///< default: the problem's tabulated z*
    std::uint64_t seed = 0;
    std::optional<std::size_t> pop_size;
    std::optional<std::size_t> max_gen;
    std::size_t kl_samples = 100;
    double answer_timeout_s = 600.0;
    std::string label;                           ///< report column; default the algorithm name
};

struct FieldError {
    std::string field;
    std::string message;
};

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<FieldError> errors);
    ConfigError(std::string field, std::string message);
    const std::vector<FieldError>& errors() const noexcept { return errors_; }
    nlohmann::json to_json() const;

private:
    std::vector<FieldError> errors_;
};

/// Subset count by objective count: {2: 10, 3: 8, 5: 12, 8: 14, 10: 18}.
std::size_t default_subsets(std::size_t m);

/// Parses and validates; unknown keys and bad values raise ConfigError.
RunConfig parse_config(const nlohmann::json& j);

/// All problems found, empty when valid.
std::vector<FieldError> validate(const RunConfig& c);

/// A validated config with every default filled in.
struct ResolvedConfig {
    RunConfig config;
    const problems::ProblemSpec* spec = nullptr;
    std::size_t k = 0;
    std::size_t budget = 0;
    std::size_t pop_size = 0;
    std::size_t max_gen = 0;
    std::size_t start_gen = 0;
    std::size_t interval = 0;
    std::size_t snapshot_every = 0;
    std::optional<Vector> golden;

    std::string label() const;
};

/// Throws ConfigError when invalid.
ResolvedConfig resolve(const RunConfig& c);

/// Serialises with every default made explicit.
nlohmann::json to_json(const ResolvedConfig& r);

} // namespace pbemo::harness
