#include "pbemo/session_service.hpp"

#include <fstream>
#include <thread>

#include <httplib.h>

namespace pbemo::service {

using nlohmann::json;

std::string to_string(Phase p)
{
    switch (p) {
    case Phase::evolving: return "evolving";
    case Phase::awaiting_answer: return "awaiting_answer";
    case Phase::terminated: return "terminated";
    case Phase::aborted: return "aborted";
    }
    return {};
}

namespace {

json candidate_json(std::size_t index, const Solution& s)
{
    return {{"index", index}, {"x", s.x}, {"f", s.f}};
}

} // namespace

struct SessionManager::Run final : harness::RunObserver {
    std::string id;
    harness::ResolvedConfig config;
    std::unique_ptr<dm::DmOracle> oracle;
    dm::HumanBridge* bridge = nullptr;
    std::unique_ptr<harness::PbemoRun> engine;
    std::jthread worker;

    std::mutex mutex;
    std::condition_variable cv;
    std::uint64_t version = 1;
    Phase phase = Phase::evolving;
    std::optional<dm::PendingQuery> pending;
    std::size_t generation = 0;
    std::size_t session = 0;
    std::size_t answered = 0;
    std::size_t consultations = 0;
    std::optional<double> kl;
    std::vector<Vector> objectives;
    json mixture = json{{"normalizer", 0.0}, {"components", json::array()}};
    json clusters = nullptr;
    std::optional<harness::RunRecord> record;
    std::string error;
    bool finished = false;

    void bump()
    {
        ++version;
        cv.notify_all();
    }

    void on_generation(const harness::PbemoRun& run) override
    {
        std::lock_guard lock(mutex);
        generation = run.population().generation;
        objectives = objectives_of(run.population().members);
        bump();
    }

    void on_session_start(const harness::PbemoRun& run) override
    {
        std::lock_guard lock(mutex);
        session = run.sessions().size() + 1;
        answered = 0;
        bump();
    }

    void on_round(const consultation::QueryRecord&, const consultation::PreferenceState& st) override
    {
        std::lock_guard lock(mutex);
        answered = st.t;
        bump();
    }

    void on_session_end(const harness::PbemoRun& run, const harness::SessionRecord& s) override
    {
        std::lock_guard lock(mutex);
        consultations = run.sessions().size();
        if (s.kl) kl = s.kl;
        mixture = run.mixture().snapshot();
        clusters = {{"generation", s.generation},
                    {"k", s.consultation.partition.size()},
                    {"assignment", s.consultation.partition.assignment},
                    {"best_subset", s.consultation.best_subset},
                    {"objectives", objectives_of(run.population().members)}};
        bump();
    }

    // The read happens under the run lock so the last notification always
    // leaves the latest bridge state behind.
    void sync_pending()
    {
        std::lock_guard lock(mutex);
        pending = bridge->pending();
        if (!finished) phase = pending ? Phase::awaiting_answer : Phase::evolving;
        bump();
    }

    json state_locked() const
    {
        json j = {{"id", id}, {"phase", to_string(phase)}, {"version", version}};
        if (pending) {
            const auto& q = *pending;
            j["query"] = {{"id", q.id},
                          {"round", q.round},
                          {"budget", config.budget},
                          {"first_cluster", q.first_cluster},
                          {"second_cluster", q.second_cluster},
                          {"a", candidate_json(q.index_a, q.a)},
                          {"b", candidate_json(q.index_b, q.b)}};
        } else {
            j["query"] = nullptr;
        }
        j["progress"] = {{"generation", generation},
                         {"max_gen", config.max_gen},
                         {"session", session},
                         {"answered", answered},
                         {"budget", config.budget},
                         {"consultations", consultations},
                         {"latest_kl", kl ? json(*kl) : json(nullptr)}};
        if (record && record->accuracy)
            j["metrics"] = {{"eps_star", record->accuracy->eps_star}, {"eps_bar", record->accuracy->eps_bar}};
        else
            j["metrics"] = nullptr;
        j["dm_aborted"] = record ? record->aborted && phase == Phase::terminated : false;
        j["error"] = error;
        return j;
    }
};

SessionManager::SessionManager(ServiceOptions options) : options_(std::move(options)) {}

SessionManager::~SessionManager()
{
    std::map<std::string, std::shared_ptr<Run>> runs;
    {
        std::lock_guard lock(mutex_);
        runs.swap(runs_);
    }
    for (auto& [id, run] : runs) {
        run->worker.request_stop();
        if (run->bridge) run->bridge->cancel();
        if (run->worker.joinable()) run->worker.join();
    }
}

std::shared_ptr<SessionManager::Run> SessionManager::find(const std::string& id)
{
    std::lock_guard lock(mutex_);
    auto it = runs_.find(id);
    if (it == runs_.end()) throw NotFound("no run with id " + id);
    return it->second;
}

json SessionManager::create(const json& config)
{
    const harness::RunConfig parsed = harness::parse_config(config);
    auto run = std::make_shared<Run>();
    run->config = harness::resolve(parsed);
    if (parsed.dm_mode == harness::DmMode::interactive) {
        auto bridge = std::make_unique<dm::HumanBridge>(std::chrono::milliseconds(
            static_cast<std::int64_t>(parsed.answer_timeout_s * 1000.0)));
        run->bridge = bridge.get();
        run->oracle = std::move(bridge);
    } else {
        run->oracle = harness::make_simulated_dm(run->config);
    }

    {
        std::lock_guard lock(mutex_);
        run->id = std::to_string(next_id_++);
    }
    run->engine = std::make_unique<harness::PbemoRun>(run->config, *run->oracle, run.get());
    run->objectives = objectives_of(run->engine->population().members);
    if (run->bridge) run->bridge->set_listener([r = run.get()] { r->sync_pending(); });
    const json initial = run->state_locked();

    const auto record_dir = options_.record_dir;
    run->worker = std::jthread([r = run.get(), record_dir](std::stop_token stop) {
        std::optional<harness::RunRecord> rec;
        std::string error;
        try {
            rec = r->engine->run(stop);
        } catch (const std::exception& e) {
            error = e.what();
        }
        if (rec && record_dir) {
            std::filesystem::create_directories(*record_dir);
            std::ofstream(*record_dir / (r->id + ".json")) << rec->to_json().dump(1) << '\n';
        }
        std::lock_guard lock(r->mutex);
        r->finished = true;
        r->pending.reset();
        r->error = error;
        r->phase = stop.stop_requested() || !error.empty() ? Phase::aborted : Phase::terminated;
        r->record = std::move(rec);
        r->bump();
    });
    std::lock_guard lock(mutex_);
    runs_[run->id] = run;
    return initial;
}

json SessionManager::state(const std::string& id, std::optional<std::uint64_t> since, std::chrono::milliseconds wait)
{
    auto run = find(id);
    std::unique_lock lock(run->mutex);
    if (since) run->cv.wait_for(lock, wait, [&] { return run->version > *since; });
    return run->state_locked();
}

dm::SubmitStatus SessionManager::answer(const std::string& id, std::uint64_t query_id, dm::Winner winner)
{
    auto run = find(id);
    if (!run->bridge) return dm::SubmitStatus::conflict;
    return run->bridge->submit(query_id, winner);
}

json SessionManager::population(const std::string& id)
{
    auto run = find(id);
    std::lock_guard lock(run->mutex);
    return {{"id", id},
            {"generation", run->generation},
            {"size", run->objectives.size()},
            {"objectives", run->objectives},
            {"mixture", run->mixture},
            {"clusters", run->clusters}};
}

json SessionManager::remove(const std::string& id)
{
    std::shared_ptr<Run> run;
    {
        std::lock_guard lock(mutex_);
        auto it = runs_.find(id);
        if (it == runs_.end()) throw NotFound("no run with id " + id);
        run = it->second;
        runs_.erase(it);
    }
    run->worker.request_stop();
    if (run->bridge) run->bridge->cancel();
    run->worker.join();
    std::lock_guard lock(run->mutex);
    return run->state_locked();
}

harness::RunRecord SessionManager::wait_record(const std::string& id)
{
    auto run = find(id);
    std::unique_lock lock(run->mutex);
    run->cv.wait(lock, [&] { return run->finished; });
    if (!run->record) throw std::runtime_error("run " + id + " failed: " + run->error);
    return *run->record;
}

namespace {

void send_json(httplib::Response& res, int status, const json& body)
{
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& message)
{
    send_json(res, status, {{"error", message}});
}

// Wraps a handler so lookups of unknown ids become 404s.
template <typename F>
httplib::Server::Handler guarded(F f)
{
    return [f](const httplib::Request& req, httplib::Response& res) {
        try {
            f(req, res);
        } catch (const NotFound& e) {
            send_error(res, 404, e.what());
        } catch (const json::exception& e) {
            send_error(res, 400, e.what());
        } catch (const std::exception& e) {
            send_error(res, 500, e.what());
        }
    };
}

} // namespace

HttpService::HttpService(SessionManager& manager) : manager_(manager), server_(std::make_unique<httplib::Server>())
{
    auto& s = *server_;
    s.Post("/runs", guarded([this](const httplib::Request& req, httplib::Response& res) {
               json body;
               try {
                   body = json::parse(req.body);
               } catch (const json::parse_error& e) {
                   return send_error(res, 400, std::string("malformed JSON: ") + e.what());
               }
               try {
                   send_json(res, 201, manager_.create(body));
               } catch (const harness::ConfigError& e) {
                   send_json(res, 422, e.to_json());
               }
           }));

    s.Get(R"(/runs/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
              send_json(res, 200, manager_.state(req.matches[1]));
          }));

    s.Get(R"(/runs/([^/]+)/query)", guarded([this](const httplib::Request& req, httplib::Response& res) {
              std::optional<std::uint64_t> since;
              auto wait = std::chrono::milliseconds(max_long_poll);
              if (req.has_param("since")) since = std::stoull(req.get_param_value("since"));
              if (req.has_param("wait")) {
                  const double w = std::stod(req.get_param_value("wait"));
                  wait = std::min(wait, std::chrono::milliseconds(static_cast<std::int64_t>(std::max(0.0, w) * 1000)));
              }
              send_json(res, 200, manager_.state(req.matches[1], since, wait));
          }));

    s.Post(R"(/runs/([^/]+)/answer)", guarded([this](const httplib::Request& req, httplib::Response& res) {
               const std::string id = req.matches[1];
               json body;
               std::uint64_t query_id = 0;
               dm::Winner winner{};
               try {
                   body = json::parse(req.body);
                   query_id = body.at("query_id").get<std::uint64_t>();
                   winner = dm::parse_winner(body.at("winner").get<std::string>());
               } catch (const std::exception& e) {
                   return send_error(res, 400, std::string("expected {\"query_id\": n, \"winner\": ...}: ") + e.what());
               }
               const auto status = manager_.answer(id, query_id, winner);
               if (status == dm::SubmitStatus::accepted)
                   send_json(res, 200, {{"status", "accepted"}, {"query_id", query_id}});
               else
                   send_json(res, 409, {{"status", "conflict"}, {"query_id", query_id}, {"state", manager_.state(id)}});
           }));

    s.Get(R"(/runs/([^/]+)/population)", guarded([this](const httplib::Request& req, httplib::Response& res) {
              send_json(res, 200, manager_.population(req.matches[1]));
          }));

    s.Delete(R"(/runs/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
                 send_json(res, 200, manager_.remove(req.matches[1]));
             }));
}

HttpService::~HttpService() { stop(); }

int HttpService::bind(const std::string& host, int port)
{
    if (port == 0) return server_->bind_to_any_port(host);
    if (!server_->bind_to_port(host, port)) throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
    return port;
}

void HttpService::listen() { server_->listen_after_bind(); }

void HttpService::stop()
{
    if (server_) server_->stop();
}

} // namespace pbemo::service
