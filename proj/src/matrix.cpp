#include "pbemo/matrix.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <map>
#include <sstream>
#include <thread>

#include <cstdio>

namespace pbemo::harness {
namespace {

std::string format(const char* pattern, double a, double b)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, a, b);
    return buf;
}

struct Stats {
    double mean = 0.0;
    double std = 0.0;
};

Stats mean_std(const std::vector<double>& v)
{
    Stats s;
    if (v.empty()) return s;
    for (double x : v) s.mean += x;
    s.mean /= static_cast<double>(v.size());
    if (v.size() < 2) return s;
    double ss = 0.0;
    for (double x : v) ss += (x - s.mean) * (x - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(v.size() - 1));
    return s;
}

nlohmann::json stats_json(const std::vector<double>& v)
{
    const Stats s = mean_std(v);
    return {{"mean", s.mean}, {"std", s.std}, {"text", format("%.4f(%.4f)", s.mean, s.std)}};
}

} // namespace

bool MatrixResult::partial_failure() const
{
    return std::any_of(rows.begin(), rows.end(), [](const MatrixRow& r) { return !r.accuracy; });
}

std::string MatrixResult::csv() const { return to_csv(rows); }

MatrixSpec parse_matrix_spec(const nlohmann::json& j)
{
    if (!j.is_object()) throw ConfigError("", "matrix config must be a JSON object");
    MatrixSpec spec;
    std::vector<FieldError> errors;
    for (const auto& [key, value] : j.items()) {
        if (key == "repeats") {
            if (value.is_number_integer() && value.get<std::int64_t>() >= 1) spec.repeats = value.get<std::size_t>();
            else errors.push_back({key, "must be a positive integer"});
        } else if (key == "wilcoxon") {
            if (value.is_boolean()) spec.wilcoxon = value.get<bool>();
            else errors.push_back({key, "expected a boolean"});
        } else if (key != "configs") {
            errors.push_back({key, "unknown key"});
        }
    }
    const auto it = j.find("configs");
    if (it == j.end() || !it->is_array() || it->empty()) {
        errors.push_back({"configs", "needs at least one run config"});
    } else {
        for (std::size_t i = 0; i < it->size(); ++i) {
            try {
                RunConfig c = parse_config((*it)[i]);
                resolve(c);
                spec.configs.push_back(std::move(c));
            } catch (const ConfigError& e) {
                for (const auto& f : e.errors())
                    errors.push_back({"configs[" + std::to_string(i) + "]." + f.field, f.message});
            }
        }
    }
    if (!errors.empty()) throw ConfigError(std::move(errors));
    return spec;
}

std::size_t default_workers()
{
    if (const char* env = std::getenv("PBEMO_WORKERS")) {
        const long n = std::strtol(env, nullptr, 10);
        if (n > 0) return static_cast<std::size_t>(n);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

MatrixResult run_matrix(const std::vector<RunConfig>& configs, std::size_t repeats, std::size_t workers, bool compare)
{
    std::vector<ResolvedConfig> resolved;
    for (const auto& c : configs) resolved.push_back(resolve(c));

    struct Cell {
        std::size_t config;
        std::uint64_t seed;
    };
    std::vector<Cell> cells;
    for (std::size_t i = 0; i < resolved.size(); ++i)
        for (std::size_t s = 0; s < repeats; ++s) cells.push_back({i, s});

    MatrixResult out;
    out.rows.resize(cells.size());
    out.records.resize(cells.size());

    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) {
            const Cell& cell = cells[i];
            ResolvedConfig rc = resolved[cell.config];
            rc.config.seed = cell.seed;
            MatrixRow& row = out.rows[i];
            row.problem = rc.spec->key();
            row.m = rc.spec->m;
            row.algorithm = rc.label();
            row.seed = cell.seed;
            try {
                auto oracle = make_simulated_dm(rc);
                RunRecord rec = run_pbemo(rc, *oracle);
                row.accuracy = rec.accuracy;
                if (!row.accuracy) row.error = "no accuracy (missing golden point)";
                out.records[i] = std::move(rec);
            } catch (const std::exception& e) {
                row.error = e.what();
            }
        }
    };

    workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(1, cells.size()));
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
        work();
    }
    out.summary = summarize(out.rows, compare);
    return out;
}

nlohmann::json summarize(const std::vector<MatrixRow>& rows, bool compare)
{
    using nlohmann::json;
    // Keep first-seen order of problems and algorithms.
    std::vector<std::string> problems;
    std::map<std::string, std::vector<std::string>> algorithms;
    std::map<std::pair<std::string, std::string>, std::vector<const MatrixRow*>> groups;
    for (const auto& r : rows) {
        if (std::find(problems.begin(), problems.end(), r.problem) == problems.end()) problems.push_back(r.problem);
        auto& algs = algorithms[r.problem];
        if (std::find(algs.begin(), algs.end(), r.algorithm) == algs.end()) algs.push_back(r.algorithm);
        groups[{r.problem, r.algorithm}].push_back(&r);
    }

    auto eps_star = [&](const std::string& p, const std::string& a) {
        std::vector<double> v;
        for (const auto* r : groups[{p, a}])
            if (r->accuracy) v.push_back(r->accuracy->eps_star);
        return v;
    };

    json cells = json::array();
    json failures = json::array();
    json comparisons = json::array();
    for (const auto& p : problems) {
        for (const auto& a : algorithms[p]) {
            std::vector<double> star, bar;
            std::size_t failed = 0;
            std::size_t m = 0;
            for (const auto* r : groups[{p, a}]) {
                m = r->m;
                if (r->accuracy) {
                    star.push_back(r->accuracy->eps_star);
                    bar.push_back(r->accuracy->eps_bar);
                } else {
                    ++failed;
                    failures.push_back({{"problem", p}, {"algorithm", a}, {"seed", r->seed}, {"error", r->error}});
                }
            }
            cells.push_back({{"problem", p},
                             {"m", m},
                             {"algorithm", a},
                             {"runs", star.size()},
                             {"failures", failed},
                             {"eps_star", stats_json(star)},
                             {"eps_bar", stats_json(bar)}});
        }
        if (!compare) continue;
        const auto& algs = algorithms[p];
        for (std::size_t i = 0; i < algs.size(); ++i) {
            for (std::size_t j = i + 1; j < algs.size(); ++j) {
                const auto a = eps_star(p, algs[i]);
                const auto b = eps_star(p, algs[j]);
                json c = {{"problem", p}, {"a", algs[i]}, {"b", algs[j]}, {"metric", "eps_star"}};
                try {
                    const auto t = metrics::wilcoxon_rank_sum(a, b);
                    c["statistic"] = t.statistic;
                    c["p_value"] = t.p_value;
                    c["significant"] = t.significant;
                    c["exact"] = t.exact;
                } catch (const std::exception& e) {
                    c["skipped"] = e.what();
                }
                comparisons.push_back(std::move(c));
            }
        }
    }
    return {{"cells", cells}, {"failures", failures}, {"comparisons", comparisons}};
}

std::string to_csv(const std::vector<MatrixRow>& rows)
{
    std::ostringstream os;
    os << csv_header << '\n';
    for (const auto& r : rows) {
        os << r.problem << ',' << r.m << ',' << r.algorithm << ',' << r.seed << ',';
        if (r.accuracy) os << format("%.17g,%.17g", r.accuracy->eps_star, r.accuracy->eps_bar);
        else os << ',';
        os << '\n';
    }
    return os.str();
}

MatrixRow row_from_record(const nlohmann::json& record)
{
    const auto& cfg = record.at("config");
    MatrixRow r;
    r.problem = cfg.at("problem").get<std::string>();
    r.m = problems::problem(r.problem).m;
    r.algorithm = cfg.value("label", cfg.at("algorithm").get<std::string>());
    r.seed = cfg.at("seed").get<std::uint64_t>();
    const auto& acc = record.at("accuracy");
    if (!acc.is_null()) r.accuracy = metrics::Accuracy{acc.at("eps_star"), acc.at("eps_bar")};
    else r.error = record.value("abort_reason", std::string{});
    return r;
}

} // namespace pbemo::harness
