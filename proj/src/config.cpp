#include "pbemo/config.hpp"

#include <cmath>
#include <limits>
#include <set>

namespace pbemo::harness {
namespace {

using nlohmann::json;

const std::set<std::string>& known_keys()
{
    static const std::set<std::string> keys{
        "problem",   "algorithm",  "K",          "T",        "alpha",         "epsilon",
        "consult_start", "consult_interval", "dm_mode", "sigma_star", "stochastic_dm", "golden_point",
        "seed",      "pop_size",   "max_gen",    "kl_samples", "answer_timeout_s", "label"};
    return keys;
}

Algorithm parse_algorithm(const std::string& s)
{
    if (s == "d-pbnsga2") return Algorithm::pbnsga2;
    if (s == "d-pbmoead") return Algorithm::pbmoead;
    if (s == "d-pbemo-dts") return Algorithm::pbemo_dts;
    throw std::invalid_argument("expected one of d-pbnsga2, d-pbmoead, d-pbemo-dts");
}

DmMode parse_mode(const std::string& s)
{
    if (s == "simulated") return DmMode::simulated;
    if (s == "interactive") return DmMode::interactive;
    throw std::invalid_argument("expected simulated or interactive");
}

double parse_epsilon(const json& v)
{
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
        throw std::invalid_argument("expected a number or \"inf\"");
    }
    if (!v.is_number()) throw std::invalid_argument("expected a number or \"inf\"");
    return v.get<double>();
}

std::size_t parse_count(const json& v)
{
    if (!v.is_number_integer()) throw std::invalid_argument("expected an integer");
    const auto n = v.get<long long>();
    if (n < 0) throw std::invalid_argument("must be non-negative");
    return static_cast<std::size_t>(n);
}

double parse_number(const json& v)
{
    if (!v.is_number()) throw std::invalid_argument("expected a number");
    return v.get<double>();
}

std::size_t ceil_fraction(double fraction, std::size_t g)
{
    return static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(g) - 1e-9));
}

} // namespace

std::string to_string(Algorithm a)
{
    switch (a) {
    case Algorithm::pbnsga2: return "d-pbnsga2";
    case Algorithm::pbmoead: return "d-pbmoead";
    case Algorithm::pbemo_dts: return "d-pbemo-dts";
    }
    return {};
}

std::string to_string(DmMode m) { return m == DmMode::simulated ? "simulated" : "interactive"; }

ConfigError::ConfigError(std::string field, std::string message)
    : ConfigError(std::vector<FieldError>{{std::move(field), std::move(message)}})
{
}

ConfigError::ConfigError(std::vector<FieldError> errors)
    : std::runtime_error([&] {
          std::string msg = "invalid run config:";
          for (const auto& e : errors) msg += " " + e.field + ": " + e.message + ";";
          return msg;
      }()),
      errors_(std::move(errors))
{
}

json ConfigError::to_json() const
{
    auto arr = json::array();
    for (const auto& e : errors_) arr.push_back({{"field", e.field}, {"message", e.message}});
    return {{"error", "invalid config"}, {"fields", arr}};
}

std::size_t default_subsets(std::size_t m)
{
    switch (m) {
    case 2: return 10;
    case 3: return 8;
    case 5: return 12;
    case 8: return 14;
    case 10: return 18;
    default: throw std::out_of_range("no default subset count for m=" + std::to_string(m));
    }
}

RunConfig parse_config(const json& j)
{
    if (!j.is_object()) throw ConfigError("", "config must be a JSON object");
    RunConfig c;
    std::vector<FieldError> errors;
    for (const auto& [key, value] : j.items()) {
        if (!known_keys().contains(key)) {
            errors.push_back({key, "unknown key"});
            continue;
        }
        try {
            if (key == "problem") {
                if (!value.is_string()) throw std::invalid_argument("expected a string");
                c.problem = value.get<std::string>();
            } else if (key == "algorithm") {
                if (!value.is_string()) throw std::invalid_argument("expected a string");
                c.algorithm = parse_algorithm(value.get<std::string>());
            } else if (key == "K") {
                c.k = parse_count(value);
            } else if (key == "T") {
                c.budget = parse_count(value);
            } else if (key == "alpha") {
                c.alpha = parse_number(value);
            } else if (key == "epsilon") {
                c.epsilon = parse_epsilon(value);
            } else if (key == "consult_start") {
                c.consult_start = parse_number(value);
            } else if (key == "consult_interval") {
                c.consult_interval = parse_count(value);
            } else if (key == "dm_mode") {
                if (!value.is_string()) throw std::invalid_argument("expected a string");
                c.dm_mode = parse_mode(value.get<std::string>());
            } else if (key == "sigma_star") {
                c.sigma_star = parse_number(value);
            } else if (key == "stochastic_dm") {
                if (!value.is_boolean()) throw std::invalid_argument("expected a boolean");
                c.stochastic_dm = value.get<bool>();
            } else if (key == "golden_point") {
                if (value.is_null()) continue;
                if (!value.is_array()) throw std::invalid_argument("expected an array of numbers");
                Vector g;
                for (const auto& x : value) g.push_back(parse_number(x));
                c.golden_point = std::move(g);
            } else if (key == "seed") {
                if (value.is_number_unsigned()) c.seed = value.get<std::uint64_t>();
                else if (value.is_number_integer() && value.get<std::int64_t>() >= 0) c.seed = value.get<std::uint64_t>();
                else throw std::invalid_argument("expected a non-negative integer");
            } else if (key == "pop_size") {
                c.pop_size = parse_count(value);
            } else if (key == "max_gen") {
                c.max_gen = parse_count(value);
            } else if (key == "kl_samples") {
                c.kl_samples = parse_count(value);
            } else if (key == "answer_timeout_s") {
                c.answer_timeout_s = parse_number(value);
            } else if (key == "label") {
                if (!value.is_string()) throw std::invalid_argument("expected a string");
                c.label = value.get<std::string>();
            }
        } catch (const std::exception& e) {
            errors.push_back({key, e.what()});
        }
    }
    if (errors.empty()) {
        auto more = validate(c);
        errors.insert(errors.end(), more.begin(), more.end());
    }
    if (!errors.empty()) throw ConfigError(std::move(errors));
    return c;
}

std::vector<FieldError> validate(const RunConfig& c)
{
    std::vector<FieldError> errors;
    const problems::ProblemSpec* spec = nullptr;
    try {
        spec = &problems::problem(c.problem);
    } catch (const std::out_of_range&) {
        errors.push_back({"problem", "unknown problem \"" + c.problem + "\""});
    }
    const std::size_t n = c.pop_size.value_or(spec ? spec->pop_size : 2);

    if (c.pop_size && *c.pop_size < 2) errors.push_back({"pop_size", "must be >= 2"});
    if (c.max_gen && *c.max_gen < 1) errors.push_back({"max_gen", "must be >= 1"});
    if (c.k) {
        if (*c.k < 1) errors.push_back({"K", "must be >= 1"});
        else if (*c.k > n) errors.push_back({"K", "must not exceed the population size"});
    } else if (spec && c.algorithm != Algorithm::pbemo_dts) {
        try {
            if (default_subsets(spec->m) > n) errors.push_back({"K", "default exceeds the population size"});
        } catch (const std::out_of_range& e) {
            errors.push_back({"K", e.what()});
        }
    }
    if (c.budget && *c.budget < 1) errors.push_back({"T", "must be >= 1"});
    if (!(c.alpha > 0.0) || !std::isfinite(c.alpha)) errors.push_back({"alpha", "must be a positive number"});
    if (!(c.epsilon >= 0.0)) errors.push_back({"epsilon", "must be >= 0 or \"inf\""});
    if (!(c.consult_start >= 0.0 && c.consult_start <= 1.0)) errors.push_back({"consult_start", "must lie in [0, 1]"});
    if (c.consult_interval && *c.consult_interval < 1) errors.push_back({"consult_interval", "must be >= 1"});
    if (!(c.sigma_star > 0.0) || !std::isfinite(c.sigma_star)) errors.push_back({"sigma_star", "must be a positive number"});
    if (c.kl_samples < 1) errors.push_back({"kl_samples", "must be >= 1"});
    if (!(c.answer_timeout_s > 0.0)) errors.push_back({"answer_timeout_s", "must be positive"});
    if (spec) {
        if (c.golden_point && c.golden_point->size() != spec->m)
            errors.push_back({"golden_point", "needs " + std::to_string(spec->m) + " coordinates"});
        if (c.dm_mode == DmMode::simulated && !c.golden_point && !spec->golden)
            errors.push_back({"golden_point", "no tabulated golden point for " + spec->key() + "; give one"});
    }
    return errors;
}

std::string ResolvedConfig::label() const { return config.label.empty() ? to_string(config.algorithm) : config.label; }

ResolvedConfig resolve(const RunConfig& c)
{
    auto errors = validate(c);
    if (!errors.empty()) throw ConfigError(std::move(errors));

    ResolvedConfig r;
    r.config = c;
    r.spec = &problems::problem(c.problem);
    r.pop_size = c.pop_size.value_or(r.spec->pop_size);
    r.max_gen = c.max_gen.value_or(r.spec->max_gen);
    r.k = c.algorithm == Algorithm::pbemo_dts ? r.pop_size : c.k.value_or(default_subsets(r.spec->m));
    r.budget = c.budget.value_or(c.dm_mode == DmMode::interactive ? 20 : 100);
    r.start_gen = ceil_fraction(c.consult_start, r.max_gen);
    r.interval = c.consult_interval.value_or(std::max<std::size_t>(1, ceil_fraction(0.1, r.max_gen)));
    r.snapshot_every = std::max<std::size_t>(1, (r.max_gen + 49) / 50);
    r.golden = c.golden_point ? c.golden_point : r.spec->golden;
    return r;
}

json to_json(const ResolvedConfig& r)
{
    const auto& c = r.config;
    json j = {
        {"problem", c.problem},
        {"algorithm", to_string(c.algorithm)},
        {"label", r.label()},
        {"K", r.k},
        {"T", r.budget},
        {"alpha", c.alpha},
        {"consult_start", c.consult_start},
        {"consult_interval", r.interval},
        {"dm_mode", to_string(c.dm_mode)},
        {"sigma_star", c.sigma_star},
        {"stochastic_dm", c.stochastic_dm},
        {"seed", c.seed},
        {"pop_size", r.pop_size},
        {"max_gen", r.max_gen},
        {"kl_samples", c.kl_samples},
        {"answer_timeout_s", c.answer_timeout_s},
    };
    j["epsilon"] = std::isinf(c.epsilon) ? json("inf") : json(c.epsilon);
    j["golden_point"] = r.golden ? json(*r.golden) : json(nullptr);
    return j;
}

} // namespace pbemo::harness
