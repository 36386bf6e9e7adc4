#pragma once

#include <memory>
#include <optional>
#include <stop_token>
#include <string>
#include <vector>

#include <json.hpp>

#include "pbemo/config.hpp"
#include "pbemo/consultation.hpp"
#include "pbemo/dm.hpp"
#include "pbemo/metrics.hpp"
#include "pbemo/mixture.hpp"
#include "pbemo/moead.hpp"
#include "pbemo/nsga2.hpp"

namespace pbemo::harness {

/// One consultation session and what was learned from it.
struct SessionRecord {
    std::size_t index = 0;      ///< 1-based session number tau
    std::size_t generation = 0; ///< generations completed when it ran
    consultation::ConsultationResult consultation;
    std::optional<elicitation::GaussianComponent> component;
    std::optional<double> kl;   ///< from session 2 onward
    bool insufficient = false;  ///< no wins or no losses, mixture unchanged
    bool aborted = false;
};

struct Snapshot {
    std::size_t generation = 0;
    std::vector<Vector> objectives;
};

struct RunRecord {
    ResolvedConfig config;
    std::vector<Snapshot> snapshots;
    std::vector<SessionRecord> sessions;
    std::vector<Solution> final_population;
    std::optional<metrics::Accuracy> accuracy;
    bool aborted = false;
    std::string abort_reason;
    double wall_clock_ms = 0.0;

    std::size_t consultations() const noexcept { return sessions.size(); }
    /// Wall-clock fields are omitted unless `with_timing`.
    nlohmann::json to_json(bool with_timing = true) const;
};

/// Hooks for live observers. Called on the run's thread.
class RunObserver {
public:
    virtual ~RunObserver() = default;
    virtual void on_generation(const class PbemoRun&) {}
    virtual void on_session_start(const PbemoRun&) {}
    virtual void on_round(const consultation::QueryRecord&, const consultation::PreferenceState&) {}
    virtual void on_session_end(const PbemoRun&, const SessionRecord&) {}
};

/// Interleaved optimisation and consultation, one generation per step.
class PbemoRun {
public:
    PbemoRun(ResolvedConfig config, dm::DmOracle& oracle, RunObserver* observer = nullptr);

    bool done() const noexcept;
    /// Consults if a checkpoint is due, then evolves one generation.
    void step();
    /// Steps until done or a stop is requested; returns the record.
    RunRecord run(std::stop_token stop = {});
    RunRecord finish();

    const ResolvedConfig& config() const noexcept { return config_; }
    const evolution::Population& population() const noexcept { return pop_; }
    const elicitation::PreferenceMixture& mixture() const noexcept { return mixture_; }
    const std::vector<SessionRecord>& sessions() const noexcept { return record_.sessions; }
    std::optional<double> latest_kl() const noexcept;
    bool consultation_closed() const noexcept { return terminated_ || dm_failed_; }

    /// True when a session would run before the next generation.
    bool consultation_due() const noexcept;

private:
    void consult();
    void snapshot_if_due();

    ResolvedConfig config_;
    dm::DmOracle& oracle_;
    RunObserver* observer_;
    Rng rng_;
    evolution::GeneticParams params_;
    evolution::Population pop_;
    evolution::WeightSet base_weights_;
    evolution::WeightSet weights_;
    Vector ideal_;
    elicitation::PreferenceMixture mixture_;
    double last_kl_;
    bool terminated_ = false;
    bool dm_failed_ = false;
    RunRecord record_;
};

/// Simulated DM from the config (golden point, sigma*, seed).
std::unique_ptr<dm::DmOracle> make_simulated_dm(const ResolvedConfig& config);

RunRecord run_pbemo(const ResolvedConfig& config, dm::DmOracle& oracle, RunObserver* observer = nullptr,
                    std::stop_token stop = {});
/// Simulated-DM run.
RunRecord run_pbemo(const RunConfig& config);

} // namespace pbemo::harness
