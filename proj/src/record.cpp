#include "pbemo/run.hpp"

namespace pbemo::harness {

nlohmann::json RunRecord::to_json(bool with_timing) const
{
    using nlohmann::json;
    auto sessions_json = json::array();
    for (const auto& s : sessions) {
        json j = {{"index", s.index},
                  {"generation", s.generation},
                  {"best_subset", s.consultation.best_subset},
                  {"insufficient", s.insufficient},
                  {"aborted", s.aborted},
                  {"consultation", s.consultation.to_json(with_timing)}};
        j["kl"] = s.kl ? json(*s.kl) : json(nullptr);
        if (s.component)
            j["component"] = {{"session", s.component->session},
                              {"mean", s.component->mean},
                              {"variance", s.component->variance},
                              {"sigma", s.component->sigma}};
        else
            j["component"] = nullptr;
        sessions_json.push_back(std::move(j));
    }

    auto snaps = json::array();
    for (const auto& s : snapshots) snaps.push_back({{"generation", s.generation}, {"objectives", s.objectives}});

    auto final_pop = json::array();
    for (const auto& s : final_population) final_pop.push_back({{"x", s.x}, {"f", s.f}});

    json j = {{"config", harness::to_json(config)},
              {"consultations", consultations()},
              {"aborted", aborted},
              {"abort_reason", abort_reason},
              {"sessions", std::move(sessions_json)},
              {"snapshots", std::move(snaps)},
              {"final_population", std::move(final_pop)}};
    j["accuracy"] = accuracy ? json{{"eps_star", accuracy->eps_star}, {"eps_bar", accuracy->eps_bar}} : json(nullptr);
    if (with_timing) j["wall_clock_ms"] = wall_clock_ms;
    return j;
}

} // namespace pbemo::harness
