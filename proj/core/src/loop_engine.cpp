#include "ouroboros/loop_engine.hpp"

#include <algorithm>
#include <cmath>

#include "ouroboros/error.hpp"

namespace ouroboros {

namespace {

std::set<SchemaId> active_bypass(EpisodeState& state) {
    std::set<SchemaId> ids;
    for (auto it = state.bypass.begin(); it != state.bypass.end();) {
        if (it->second <= state.tick) {
            it = state.bypass.erase(it);
        } else {
            ids.insert(it->first);
            ++it;
        }
    }
    return ids;
}

void clear_segment(EpisodeState& state) {
    state.current.reset();
    state.bound.clear();
    state.fit_history.clear();
    state.iteration = 0;
    state.pending_request.reset();
    state.best_fit.reset();
    state.stall = 0;
    state.satisfied_streak = 0;
    state.last_verdict.reset();
    state.rivals = 0;
    state.close_rival = false;
    state.concluded = false;
}

std::vector<FeatureDatum> recent_window(const EpisodeState& state, std::size_t k) {
    const std::size_t n = state.features.size();
    const std::size_t from = n > k ? n - k : 0;
    return {state.features.begin() + static_cast<std::ptrdiff_t>(from), state.features.end()};
}

void record_memory(EpisodeState& state, EpisodeTrace& trace, MemoryKind kind, double importance,
                   const EngineConfig& config) {
    MemoryEvent event{kind, recent_window(state, config.memory.window),
                      std::clamp(importance, 0.0, 1.0), state.tick};
    if (event.window.empty()) return;
    trace.memory_events.push_back(event);
    trace.append(state.tick, MemoryRecord{std::move(event)});
}

}  // namespace

double apply_reset(EpisodeState& state, MonitorState& monitor, ResetCause cause,
                   const EngineConfig& config, EpisodeTrace& trace) {
    if (!state.current) throw Error(ErrorCode::NoCurrentSchema, "reset without a current schema");
    const double tension = monitor.tension;
    const auto& loop = config.loop;
    // The small slack keeps e.g. 3 + 27 * 0.5 from rounding up past 17.
    const Tick span =
        static_cast<Tick>(std::ceil(loop.b_min + (loop.b_max - loop.b_min) * tension - 1e-9));
    const Tick expiry = state.tick + span;
    state.bypass[*state.current] = expiry;

    double released = 0.0;
    if (cause == ResetCause::Impasse) {
        released = tension * (1.0 - loop.impasse_tension_retained);
        monitor.tension = std::clamp(tension - released, 0.0, 1.0);
        monitor.arousal = monitor.tension;
    }
    trace.append(state.tick, ResetEvent{cause, *state.current, tension, expiry, released});
    if (cause == ResetCause::Impasse)
        record_memory(state, trace, MemoryKind::Impasse, tension, config);
    clear_segment(state);
    return released;
}

std::optional<ResetCause> check_timeout(const EpisodeState& state, const MonitorState& monitor,
                                        int n_candidates, double schema_strength,
                                        const EngineConfig& config) {
    if (state.iteration == 0 || !state.last_verdict) return std::nullopt;
    if (*state.last_verdict == Verdict::Gap &&
        state.stall >= timeout_budget(monitor, schema_strength, n_candidates, config.monitor))
        return ResetCause::Timeout;
    if (*state.last_verdict == Verdict::Satisfied && state.satisfied_streak >= config.loop.n_flip &&
        state.close_rival)
        return ResetCause::Flip;
    return std::nullopt;
}

StepResult step(EpisodeState& state, MonitorState& monitor, const SchemaStore& store,
                std::span<const FeatureDatum> input_batch, const EngineConfig& config,
                EpisodeTrace& trace) {
    const Tick now = state.tick;
    for (const auto& f : input_batch) {
        validate_feature(f);
        state.features.push_back(f);
    }
    const bool new_input = !input_batch.empty();
    const auto bypass = active_bypass(state);

    const auto ranked = candidate_activations(store, state.features, bypass, monitor.arousal,
                                              config.activation, config.matcher);
    bool adopted_now = false;
    if (!state.current) {
        auto winner = select_winner(ranked, config.activation.floor);
        if (!winner) {
            ++state.tick;
            return {Continue{}, std::nullopt};
        }
        clear_segment(state);
        state.current = *winner;
        monitor = on_adoption(monitor);
        adopted_now = true;
    }

    const SchemaId current = *state.current;
    const Schema& schema = store.at(current);
    double current_activation = 0.0;
    for (const auto& e : ranked)
        if (e.schema_id == current) current_activation = e.activation;
    state.rivals = 0;
    state.close_rival = false;
    for (const auto& e : ranked) {
        if (e.schema_id == current || e.activation < config.activation.floor) continue;
        ++state.rivals;
        if (e.activation >= current_activation - config.loop.delta) state.close_rival = true;
    }
    if (adopted_now) trace.append(now, AdoptEvent{current, current_activation, state.rivals});

    ConsumptionReport report =
        consumption_analysis(schema, state.features, state.iteration, store, config.matcher);
    ++state.iteration;
    state.fit_history.push_back(report.fit);
    state.bound = report.bindings;
    state.last_verdict = report.verdict;

    if (!state.best_fit) {
        state.best_fit = report.fit;
        state.stall = 1;
    } else if (report.fit >= *state.best_fit + config.loop.epsilon) {
        state.best_fit = report.fit;
        state.stall = 0;
    } else {
        state.best_fit = std::max(*state.best_fit, report.fit);
        ++state.stall;
    }

    if (report.verdict != Verdict::Satisfied)
        state.satisfied_streak = 0;
    else if (new_input && !adopted_now)
        state.satisfied_streak = 0;
    else
        ++state.satisfied_streak;

    monitor = update_monitor(monitor, report, config.monitor);
    trace.append(now, ReportEvent{report, state.iteration, monitor});

    StepResult result{Continue{}, report};
    std::optional<ResetCause> cause;
    if (report.verdict == Verdict::Impasse)
        cause = ResetCause::Impasse;
    else
        cause = check_timeout(state, monitor, state.rivals, schema.strength, config);

    if (cause) {
        const double released = apply_reset(state, monitor, *cause, config, trace);
        result.action = Reset{*cause, released};
    } else if (report.verdict == Verdict::Satisfied) {
        auto release = release_tension(monitor, config.monitor);
        monitor = release.state;
        trace.append(now, ConcludeEvent{current, report.fit, release.released, state.iteration});
        if (!state.concluded && config.memory.record_success)
            record_memory(state, trace, MemoryKind::Success, release.released, config);
        state.concluded = true;
        result.action = Conclude{current, report.fit};
    } else {
        auto highlights = highlight_slots(report, schema);
        if (!highlights.empty()) {
            state.pending_request = highlights.front();
            result.action = RequestData{highlights.front()};
        }
    }
    ++state.tick;
    return result;
}

EpisodeTrace run_episode(const SchemaStore& store, MonitorState monitor, const Scenario& scenario,
                         const EngineConfig& config, const EpisodeLimits& limits) {
    if (limits.max_ticks <= 0) throw Error(ErrorCode::InvalidArgument, "max_ticks must be positive");
    if (auto bad = config.validate()) throw Error(ErrorCode::InvalidArgument, *bad);
    validate_scenario(scenario);

    EpisodeTrace trace;
    ScenarioRun run(scenario);
    EpisodeState state;
    std::vector<FeatureDatum> requested;
    bool finished = false;

    try {
        while (!finished && state.tick < limits.max_ticks) {
            const Tick now = state.tick;
            auto batch = run.due(now);
            if (now > 0 && !batch.empty() && state.current)
                monitor = register_interrupt(monitor, config.monitor);
            batch.insert(batch.end(), requested.begin(), requested.end());
            requested.clear();

            StepResult result = step(state, monitor, store, batch, config, trace);
            if (result.report) trace.last_verdict = result.report->verdict;

            if (auto* req = std::get_if<RequestData>(&result.action)) {
                auto reveal = run.attend(req->request, state.tick);
                RequestEvent event{req->request.dimension, req->request.slot_index,
                                   req->request.weight, std::nullopt, std::nullopt};
                if (reveal) {
                    event.ground_index = reveal->ground_index;
                    event.position = reveal->feature.position;
                    requested.push_back(std::move(reveal->feature));
                }
                trace.append(now, std::move(event));
            } else if (auto* done = std::get_if<Conclude>(&result.action)) {
                trace.concluded_schema = done->schema;
                if (limits.stop_on_conclude) {
                    trace.outcome = EpisodeOutcome::Concluded;
                    finished = true;
                }
            } else if (std::holds_alternative<Continue>(result.action)) {
                if (!state.current && requested.empty() && !run.has_input_after(now)) {
                    trace.outcome = EpisodeOutcome::Exhausted;
                    finished = true;
                }
            }
        }
        if (!finished) trace.outcome = EpisodeOutcome::MaxTicks;
    } catch (const Error& e) {
        trace.outcome = EpisodeOutcome::Aborted;
        trace.error = e.what();
    }

    trace.iterations = static_cast<int>(trace.events_of<ReportEvent>().size());
    trace.ticks = state.tick;
    trace.final_monitor = monitor;
    return trace;
}

}  // namespace ouroboros
