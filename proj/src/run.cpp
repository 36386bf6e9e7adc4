#include "pbemo/run.hpp"

#include <chrono>
#include <cmath>

#include "pbemo/elicitation.hpp"

namespace pbemo::harness {
namespace {

bool uses_moead(const ResolvedConfig& c) { return c.config.algorithm == Algorithm::pbmoead; }

std::vector<Vector> first_front(std::span<const Solution> members)
{
    const auto objs = objectives_of(members);
    std::vector<Vector> out;
    const auto fronts = evolution::fast_nondominated_sort(objs);
    for (std::size_t i : fronts.front()) out.push_back(objs[i]);
    return out;
}

} // namespace

PbemoRun::PbemoRun(ResolvedConfig config, dm::DmOracle& oracle, RunObserver* observer)
    : config_(std::move(config)),
      oracle_(oracle),
      observer_(observer),
      rng_(config_.config.seed),
      params_(evolution::GeneticParams::defaults(config_.spec->n)),
      last_kl_(std::numeric_limits<double>::infinity())
{
    record_.config = config_;
    pop_ = evolution::random_population(*config_.spec, config_.pop_size, rng_);
    if (uses_moead(config_)) {
        base_weights_ = evolution::WeightSet::uniform(config_.pop_size, config_.spec->m);
        weights_ = base_weights_;
        ideal_ = evolution::ideal_point(pop_.members);
    }
    snapshot_if_due();
}

bool PbemoRun::done() const noexcept { return pop_.generation >= config_.max_gen; }

std::optional<double> PbemoRun::latest_kl() const noexcept
{
    if (std::isinf(last_kl_)) return std::nullopt;
    return last_kl_;
}

bool PbemoRun::consultation_due() const noexcept
{
    const std::size_t g = pop_.generation;
    return !done() && !terminated_ && !dm_failed_ && last_kl_ > config_.config.epsilon && g >= config_.start_gen &&
           (g - config_.start_gen) % config_.interval == 0;
}

void PbemoRun::step()
{
    if (done()) return;
    if (consultation_due()) consult();

    if (uses_moead(config_)) {
        auto [next, z] = evolution::moead_generation(*config_.spec, pop_, weights_, ideal_, params_, rng_);
        pop_ = std::move(next);
        ideal_ = std::move(z);
    } else {
        const evolution::Survival survival = mixture_.empty()
                                                 ? evolution::Survival{evolution::CrowdingSurvival{}}
                                                 : evolution::Survival{evolution::PreferenceSurvival{&mixture_}};
        pop_ = evolution::nsga2_generation(*config_.spec, pop_, params_, survival, rng_);
    }
    snapshot_if_due();
    if (observer_) observer_->on_generation(*this);
}

void PbemoRun::snapshot_if_due()
{
    const std::size_t g = pop_.generation;
    if (g % config_.snapshot_every == 0 || g == config_.max_gen)
        record_.snapshots.push_back({g, objectives_of(pop_.members)});
}

void PbemoRun::consult()
{
    SessionRecord s;
    s.index = record_.sessions.size() + 1;
    s.generation = pop_.generation;
    if (observer_) observer_->on_session_start(*this);

    consultation::RoundObserver on_round;
    if (observer_)
        on_round = [this](const consultation::QueryRecord& q, const consultation::PreferenceState& st) {
            observer_->on_round(q, st);
        };

    const auto& c = config_.config;
    try {
        s.consultation = c.algorithm == Algorithm::pbemo_dts
                             ? consultation::dts_run(pop_.members, config_.budget, c.alpha, oracle_, rng_, on_round)
                             : consultation::cdts_run(pop_.members, config_.k, config_.budget, c.alpha, oracle_,
                                                      rng_, on_round);
    } catch (const consultation::ConsultationAborted& e) {
        s.consultation = e.partial();
        s.aborted = true;
        dm_failed_ = true;
        record_.aborted = true;
        record_.abort_reason = e.what();
        record_.sessions.push_back(std::move(s));
        if (observer_) observer_->on_session_end(*this, record_.sessions.back());
        return;
    }

    const auto decisions = decisions_of(pop_.members);
    try {
        const auto sets = elicitation::expand_samples(decisions, s.consultation.state.v, s.consultation.state.l);
        const auto ratio = elicitation::estimate_density_ratio(sets.losers, sets.winners);
        s.component = elicitation::fit_gaussian(ratio, s.index);
    } catch (const elicitation::InsufficientFeedback&) {
        s.insufficient = true;
        record_.sessions.push_back(std::move(s));
        if (observer_) observer_->on_session_end(*this, record_.sessions.back());
        return;
    }

    auto next = elicitation::mixture_update(mixture_, *s.component);
    if (!mixture_.empty()) {
        const auto members = s.consultation.partition.members()[s.consultation.best_subset];
        std::uniform_int_distribution<std::size_t> pick(0, members.size() - 1);
        std::vector<Vector> samples;
        samples.reserve(c.kl_samples);
        for (std::size_t i = 0; i < c.kl_samples; ++i) samples.push_back(decisions[members[pick(rng_)]]);
        const double d = elicitation::kl_between_sessions(mixture_, next, samples);
        s.kl = d;
        last_kl_ = d;
        terminated_ = elicitation::should_terminate(d, c.epsilon);
    }
    mixture_ = std::move(next);
    if (uses_moead(config_))
        weights_ = evolution::transform_weights(base_weights_,
                                                evolution::objective_image(mixture_, *config_.spec, ideal_));

    record_.sessions.push_back(std::move(s));
    if (observer_) observer_->on_session_end(*this, record_.sessions.back());
}

RunRecord PbemoRun::run(std::stop_token stop)
{
    const auto start = std::chrono::steady_clock::now();
    while (!done()) {
        if (stop.stop_requested()) {
            record_.aborted = true;
            if (record_.abort_reason.empty()) record_.abort_reason = "cancelled";
            break;
        }
        step();
    }
    RunRecord r = finish();
    r.wall_clock_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return r;
}

RunRecord PbemoRun::finish()
{
    RunRecord r = record_;
    r.final_population = pop_.members;
    if (config_.golden) r.accuracy = metrics::accuracy(first_front(pop_.members), *config_.golden);
    return r;
}

std::unique_ptr<dm::DmOracle> make_simulated_dm(const ResolvedConfig& config)
{
    if (!config.golden) throw ConfigError("golden_point", "simulated DM needs a golden point");
    const auto& c = config.config;
    return std::make_unique<dm::SimulatedDm>(*config.golden, c.sigma_star, c.stochastic_dm, c.seed);
}

RunRecord run_pbemo(const ResolvedConfig& config, dm::DmOracle& oracle, RunObserver* observer, std::stop_token stop)
{
    PbemoRun run(config, oracle, observer);
    return run.run(stop);
}

RunRecord run_pbemo(const RunConfig& config)
{
    const ResolvedConfig r = resolve(config);
    auto oracle = make_simulated_dm(r);
    return run_pbemo(r, *oracle);
}

} // namespace pbemo::harness
