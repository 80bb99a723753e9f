#pragma once
// The recognition loop: get data, activate a schema, analyse consumption,
// then conclude, ask for data, or reset.

#include <map>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "ouroboros/harness.hpp"
#include "ouroboros/matcher.hpp"
#include "ouroboros/monitor.hpp"
#include "ouroboros/params.hpp"
#include "ouroboros/schema_store.hpp"
#include "ouroboros/trace.hpp"

namespace ouroboros {

struct RequestData {
    HighlightEntry request;
};

struct Conclude {
    SchemaId schema;
    double fit = 0.0;
};

struct Reset {
    ResetCause cause = ResetCause::Impasse;
    double released_tension = 0.0;
};

struct Continue {};

using Action = std::variant<RequestData, Conclude, Reset, Continue>;

struct EpisodeState {
    Tick tick = 0;
    std::optional<SchemaId> current;
    std::map<SchemaId, Tick> bypass;  // schema -> expiry tick
    std::vector<FeatureDatum> features;  // working set in arrival order
    std::vector<Binding> bound;
    std::vector<double> fit_history;  // one entry per iteration on `current`
    int iteration = 0;
    std::optional<HighlightEntry> pending_request;

    std::optional<double> best_fit;
    int stall = 0;             // iterations since the last fit improvement
    int satisfied_streak = 0;  // Satisfied iterations without new input
    std::optional<Verdict> last_verdict;
    int rivals = 0;            // other candidates above the floor
    bool close_rival = false;  // a rival within delta of the current schema
    bool concluded = false;    // success already recorded for this adoption
};

struct StepResult {
    Action action;
    std::optional<ConsumptionReport> report;
};

// One traversal of the loop at state.tick; advances the tick afterwards.
StepResult step(EpisodeState& state, MonitorState& monitor, const SchemaStore& store,
                std::span<const FeatureDatum> input_batch, const EngineConfig& config,
                EpisodeTrace& trace);

// Bypasses the current schema for ceil(b_min + (b_max - b_min) * tension)
// ticks and clears the episode segment. Impasse also records a memory event
// and keeps half the tension. Returns the released tension.
// Throws NoCurrentSchema.
double apply_reset(EpisodeState& state, MonitorState& monitor, ResetCause cause,
                   const EngineConfig& config, EpisodeTrace& trace);

// Timeout: a Gap verdict with no fit gain >= epsilon for `budget` iterations.
// Flip: n_flip Satisfied iterations without new input while a rival sits
// within delta of the current schema.
std::optional<ResetCause> check_timeout(const EpisodeState& state, const MonitorState& monitor,
                                        int n_candidates, double schema_strength,
                                        const EngineConfig& config);

struct EpisodeLimits {
    Tick max_ticks = 200;
    bool stop_on_conclude = true;  // false keeps perceiving after success
};

// Throws InvalidArgument for max_ticks <= 0. Other errors abort the episode
// and are recorded in the returned trace.
EpisodeTrace run_episode(const SchemaStore& store, MonitorState monitor, const Scenario& scenario,
                         const EngineConfig& config, const EpisodeLimits& limits = {});

}  // namespace ouroboros
