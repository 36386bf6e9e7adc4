#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include <json.hpp>

#include "pbemo/human_bridge.hpp"
#include "pbemo/run.hpp"

namespace httplib {
class Server;
}

namespace pbemo::service {

enum class Phase { evolving, awaiting_answer, terminated, aborted };
std::string to_string(Phase p);

inline constexpr std::chrono::seconds max_long_poll{25};

class NotFound : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ServiceOptions {
    /// Completed run records are written here as <id>.json when set.
    std::optional<std::filesystem::path> record_dir;
};

/// Owns live runs, one worker thread each. Interactive runs ask through a
/// HumanBridge; simulated runs play themselves.
class SessionManager {
public:
    explicit SessionManager(ServiceOptions options = {});
    ~SessionManager();
    SessionManager(const SessionManager&) = delete;
    SessionManager& operator=(const SessionManager&) = delete;

    /// Starts a run and returns its initial state (phase evolving).
    /// Throws harness::ConfigError for invalid configs.
    nlohmann::json create(const nlohmann::json& config);

    /// Session state; when `since` is given, waits up to `wait` for a
    /// version newer than it.
    nlohmann::json state(const std::string& id, std::optional<std::uint64_t> since = std::nullopt,
                         std::chrono::milliseconds wait = std::chrono::milliseconds{0});
    dm::SubmitStatus answer(const std::string& id, std::uint64_t query_id, dm::Winner winner);
    nlohmann::json population(const std::string& id);
    /// Cancels, joins and forgets the run; returns its last state.
    nlohmann::json remove(const std::string& id);

    /// Blocks until the run's worker has finished; returns the record.
    harness::RunRecord wait_record(const std::string& id);

private:
    struct Run;
    std::shared_ptr<Run> find(const std::string& id);

    ServiceOptions options_;
    std::mutex mutex_;
    std::map<std::string, std::shared_ptr<Run>> runs_;
    std::uint64_t next_id_ = 1;
};

/// JSON-over-HTTP front end for a SessionManager.
class HttpService {
public:
    explicit HttpService(SessionManager& manager);
    ~HttpService();

    /// Binds to `port` (0 picks a free one) and returns the bound port.
    int bind(const std::string& host, int port);
    /// Serves until stop(); call after bind.
    void listen();
    void stop();

private:
    SessionManager& manager_;
    std::unique_ptr<httplib::Server> server_;
};

} // namespace pbemo::service
