// pbemo command line: single runs, experiment matrices, reports and the
// consultation service.

#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "pbemo/matrix.hpp"
#include "pbemo/problems.hpp"
#include "pbemo/run.hpp"
#include "pbemo/session_service.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace pbemo;

namespace {

constexpr int exit_config = 2;
constexpr int exit_partial = 3;

json read_json(const fs::path& path)
{
    std::ifstream in(path);
    if (!in) throw harness::ConfigError("", "cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw harness::ConfigError("", path.string() + ": " + e.what());
    }
}

void write_file(const fs::path& path, const std::string& text)
{
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream(path) << text;
}

json run_summary(const harness::RunRecord& r)
{
    json j = {{"problem", r.config.config.problem},
              {"algorithm", r.config.label()},
              {"seed", r.config.config.seed},
              {"consultations", r.consultations()},
              {"aborted", r.aborted},
              {"wall_clock_ms", r.wall_clock_ms}};
    j["accuracy"] = r.accuracy ? json{{"eps_star", r.accuracy->eps_star}, {"eps_bar", r.accuracy->eps_bar}}
                               : json(nullptr);
    return j;
}

int cmd_run(const fs::path& config_path, const std::optional<fs::path>& out, std::optional<std::uint64_t> seed)
{
    harness::RunConfig cfg = harness::parse_config(read_json(config_path));
    if (seed) cfg.seed = *seed;
    if (cfg.dm_mode == harness::DmMode::interactive)
        throw harness::ConfigError("dm_mode", "interactive runs go through `pbemo serve`");
    const auto record = harness::run_pbemo(cfg);
    if (out) write_file(*out, record.to_json().dump(1) + "\n");
    std::cout << run_summary(record).dump(2) << '\n';
    return record.aborted ? exit_partial : 0;
}

int cmd_matrix(const fs::path& config_path, const fs::path& out_dir, std::size_t workers, bool keep_records)
{
    const auto spec = harness::parse_matrix_spec(read_json(config_path));
    const auto result = harness::run_matrix(spec.configs, spec.repeats, workers, spec.wilcoxon);
    write_file(out_dir / "results.csv", result.csv());
    write_file(out_dir / "summary.json", result.summary.dump(2) + "\n");
    if (keep_records) {
        for (std::size_t i = 0; i < result.rows.size(); ++i) {
            if (!result.rows[i].accuracy) continue;
            const auto& row = result.rows[i];
            write_file(out_dir / "records" / (row.problem + "_" + row.algorithm + "_" + std::to_string(row.seed) + ".json"),
                       result.records[i].to_json().dump(1) + "\n");
        }
    }
    std::cout << result.csv();
    for (const auto& cell : result.summary["cells"])
        std::cerr << cell["problem"].get<std::string>() << ' ' << cell["algorithm"].get<std::string>()
                  << " eps*=" << cell["eps_star"]["text"].get<std::string>()
                  << " eps_bar=" << cell["eps_bar"]["text"].get<std::string>() << '\n';
    return result.partial_failure() ? exit_partial : 0;
}

int cmd_report(const std::vector<fs::path>& inputs, const std::optional<fs::path>& out, bool wilcoxon)
{
    std::vector<fs::path> files;
    for (const auto& p : inputs) {
        if (fs::is_directory(p)) {
            for (const auto& e : fs::directory_iterator(p))
                if (e.path().extension() == ".json") files.push_back(e.path());
        } else {
            files.push_back(p);
        }
    }
    std::sort(files.begin(), files.end());
    std::vector<harness::MatrixRow> rows;
    for (const auto& f : files) rows.push_back(harness::row_from_record(read_json(f)));
    const std::string csv = harness::to_csv(rows);
    if (out) {
        write_file(*out, csv);
        write_file(fs::path(*out).replace_extension(".summary.json"),
                   harness::summarize(rows, wilcoxon).dump(2) + "\n");
    }
    std::cout << csv;
    return 0;
}

service::HttpService* active_service = nullptr;

int cmd_serve(const std::string& host, int port, const std::optional<fs::path>& records)
{
    service::SessionManager manager({records});
    service::HttpService http(manager);
    const int bound = http.bind(host, port);
    std::cerr << "listening on http://" << host << ':' << bound << '\n';
    active_service = &http;
    std::signal(SIGINT, [](int) {
        if (active_service) active_service->stop();
    });
    std::signal(SIGTERM, [](int) {
        if (active_service) active_service->stop();
    });
    http.listen();
    active_service = nullptr;
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Preference-based evolutionary multi-objective optimisation"};
    app.require_subcommand(1);

    fs::path run_config;
    std::optional<fs::path> run_out;
    std::optional<std::uint64_t> run_seed;
    auto* run = app.add_subcommand("run", "Run one config with the simulated DM");
    run->add_option("config", run_config, "RunConfig JSON file")->required()->check(CLI::ExistingFile);
    run->add_option("-o,--out", run_out, "Write the full RunRecord here");
    run->add_option("--seed", run_seed, "Override the config's seed");

    fs::path matrix_config;
    fs::path matrix_out = "matrix-out";
    std::size_t workers = harness::default_workers();
    bool keep_records = false;
    auto* matrix = app.add_subcommand("matrix", "Run configs x seeds and tabulate accuracy");
    matrix->add_option("config", matrix_config, "Matrix JSON file")->required()->check(CLI::ExistingFile);
    matrix->add_option("-o,--out-dir", matrix_out, "Output directory for results.csv and summary.json");
    matrix->add_option("-j,--workers", workers, "Worker threads (default PBEMO_WORKERS or core count)");
    matrix->add_flag("--records", keep_records, "Also write every RunRecord");

    std::vector<fs::path> report_inputs;
    std::optional<fs::path> report_out;
    bool report_wilcoxon = true;
    auto* report = app.add_subcommand("report", "Tabulate saved RunRecords as CSV");
    report->add_option("records", report_inputs, "Record files or directories")->required();
    report->add_option("-o,--out", report_out, "CSV path; a .summary.json is written next to it");
    report->add_flag("!--no-wilcoxon", report_wilcoxon, "Skip pairwise rank-sum tests");

    auto* problems_cmd = app.add_subcommand("problems", "Print the benchmark constants table");

    std::string host = "127.0.0.1";
    int port = 8080;
    std::optional<fs::path> serve_records;
    auto* serve = app.add_subcommand("serve", "Serve live runs over HTTP");
    serve->add_option("--host", host, "Bind address");
    serve->add_option("-p,--port", port, "Port (0 picks a free one)");
    serve->add_option("--records", serve_records, "Directory for completed run records");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) return cmd_run(run_config, run_out, run_seed);
        if (*matrix) return cmd_matrix(matrix_config, matrix_out, workers, keep_records);
        if (*report) return cmd_report(report_inputs, report_out, report_wilcoxon);
        if (*problems_cmd) {
            std::cout << problems::constants_table().dump(2) << '\n';
            return 0;
        }
        if (*serve) return cmd_serve(host, port, serve_records);
    } catch (const harness::ConfigError& e) {
        std::cerr << e.to_json().dump(2) << '\n';
        return exit_config;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
