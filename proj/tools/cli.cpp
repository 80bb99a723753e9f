#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "ouroboros/error.hpp"
#include "ouroboros/file_util.hpp"
#include "ouroboros/harness.hpp"
#include "ouroboros/loop_engine.hpp"
#include "ouroboros/memory.hpp"
#include "ouroboros/params.hpp"
#include "ouroboros/schema_store.hpp"

namespace ouroboros::cli {

namespace {

namespace fs = std::filesystem;

// Thrown for bad flag values so they map to the usage exit code.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Overrides {
    std::vector<std::pair<std::string, double*>> reals;
    std::vector<std::pair<std::string, int*>> ints;
    std::vector<std::pair<std::string, std::size_t*>> sizes;
};

Overrides bind_parameters(EngineConfig& c) {
    Overrides o;
    o.reals = {{"gamma", &c.activation.gamma},       {"floor", &c.activation.floor},
               {"theta-sat", &c.matcher.theta_sat},  {"theta-imp", &c.matcher.theta_imp},
               {"w-crit", &c.matcher.w_crit},        {"alpha", &c.monitor.alpha},
               {"beta", &c.monitor.beta},            {"rho", &c.monitor.rho},
               {"delta", &c.loop.delta},             {"epsilon", &c.loop.epsilon},
               {"tau-instant", &c.memory.tau_instant}};
    o.ints = {{"base", &c.monitor.base},
              {"n-flip", &c.loop.n_flip},
              {"b-min", &c.loop.b_min},
              {"b-max", &c.loop.b_max}};
    o.sizes = {{"window", &c.memory.window}};
    return o;
}

// Defaults file named by OUROBOROS_CONFIG: a JSON object keyed by flag name.
void apply_env_defaults(EngineConfig& config) {
    const char* path = std::getenv("OUROBOROS_CONFIG");
    if (!path || !*path) return;
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw UsageError(std::string("OUROBOROS_CONFIG: ") + e.what());
    }
    if (!j.is_object()) throw UsageError("OUROBOROS_CONFIG must hold a JSON object");
    auto o = bind_parameters(config);
    for (const auto& [key, value] : j.items()) {
        if (!value.is_number()) throw UsageError("OUROBOROS_CONFIG: '" + key + "' must be a number");
        bool known = false;
        for (auto& [name, ptr] : o.reals)
            if (name == key) *ptr = value.get<double>(), known = true;
        for (auto& [name, ptr] : o.ints)
            if (name == key) *ptr = value.get<int>(), known = true;
        for (auto& [name, ptr] : o.sizes)
            if (name == key) *ptr = value.get<std::size_t>(), known = true;
        if (!known) throw UsageError("OUROBOROS_CONFIG: unknown parameter '" + key + "'");
    }
}

void add_parameter_flags(CLI::App& app, EngineConfig& config) {
    auto o = bind_parameters(config);
    for (auto& [name, ptr] : o.reals) app.add_option("--" + name, *ptr)->capture_default_str();
    for (auto& [name, ptr] : o.ints) app.add_option("--" + name, *ptr)->capture_default_str();
    for (auto& [name, ptr] : o.sizes) app.add_option("--" + name, *ptr)->capture_default_str();
}

void check_config(const EngineConfig& config) {
    if (auto bad = config.validate()) throw UsageError(*bad);
}

Ledger load_ledger_or_empty(const fs::path& path) {
    if (!fs::exists(path)) return {};
    return load_ledger(path);
}

void save_atomic(const fs::path& path, const std::string& content, const Hooks& hooks) {
    write_file_atomic(path, content, hooks.before_rename);
}

std::string store_text(const SchemaStore& store) {
    std::ostringstream os;
    write_store(store, os);
    return os.str();
}

std::string ledger_text(const Ledger& ledger) {
    std::ostringstream os;
    write_ledger(ledger, os);
    return os.str();
}

struct RunOptions {
    std::string store;
    std::string scenario;
    std::uint64_t seed = 0;
    double jitter = 0.0;
    Tick max_ticks = 200;
    std::string trace_out;
    std::string ledger;
    Tick epoch = 0;
    bool watch = false;
};

int cmd_run(const RunOptions& opt, const EngineConfig& config, std::ostream& out,
            std::ostream& err, const Hooks& hooks) {
    if (opt.max_ticks <= 0) throw UsageError("--max-ticks must be positive");
    if (opt.jitter < 0.0) throw UsageError("--jitter must be >= 0");
    const SchemaStore store = load_store(opt.store);
    const Scenario scenario = build_scenario(opt.scenario, opt.seed, opt.jitter);

    const EpisodeTrace trace =
        run_episode(store, MonitorState{}, scenario, config, {opt.max_ticks, !opt.watch});

    if (opt.trace_out.empty())
        write_trace(trace, out);
    else
        save_atomic(opt.trace_out, to_jsonl(trace), hooks);

    if (!opt.ledger.empty() && !trace.memory_events.empty()) {
        FileLock lock(opt.ledger);
        Ledger ledger = load_ledger_or_empty(opt.ledger);
        for (MemoryEvent event : trace.memory_events) {
            event.tick += opt.epoch;
            for (auto& f : event.window) f.tick += opt.epoch;
            record_event(ledger, event, config.memory);
        }
        save_atomic(opt.ledger, ledger_text(ledger), hooks);
    }

    out << "summary outcome=" << to_string(trace.outcome)
        << " verdict=" << (trace.last_verdict ? to_string(*trace.last_verdict) : "none")
        << " schema=" << trace.concluded_schema.value_or("none")
        << " iterations=" << trace.iterations << " ticks=" << trace.ticks
        << " confidence=" << trace.final_monitor.confidence
        << " tension=" << trace.final_monitor.tension
        << " memory_events=" << trace.memory_events.size() << '\n';
    if (trace.outcome == EpisodeOutcome::Aborted) {
        err << "episode aborted: " << trace.error << '\n';
        return kIoError;
    }
    return kOk;
}

int cmd_consolidate(const std::string& store_path, const std::string& ledger_path,
                    const EngineConfig& config, std::ostream& out, const Hooks& hooks) {
    FileLock store_lock(store_path);
    FileLock ledger_lock(ledger_path);
    SchemaStore store = load_store(store_path);
    Ledger ledger = load_ledger_or_empty(ledger_path);
    const auto promoted = consolidate(ledger, store, config.memory);
    save_atomic(store_path, store_text(store), hooks);
    save_atomic(ledger_path, ledger_text(ledger), hooks);
    out << "promoted " << promoted.size();
    for (const auto& id : promoted) out << ' ' << id;
    out << '\n';
    return kOk;
}

int cmd_sleep(const std::string& store_path, const std::string& ledger_path,
              std::optional<Tick> now, const std::string& trace_out, const EngineConfig& config,
              std::ostream& out, const Hooks& hooks) {
    FileLock store_lock(store_path);
    FileLock ledger_lock(ledger_path);
    const SchemaStore store = load_store(store_path);
    Ledger ledger = load_ledger_or_empty(ledger_path);
    if (!now) {
        now = 0;
        for (const auto& c : ledger.candidates) now = std::max(*now, c.last_seen_tick);
    }
    const SleepReport report = sleep_cycle(ledger, store, *now, config.memory);
    save_atomic(ledger_path, ledger_text(ledger), hooks);
    if (!trace_out.empty()) {
        std::ofstream trace(trace_out, std::ios::app);
        if (!trace) throw Error(ErrorCode::IoError, "cannot append to '" + trace_out + "'");
        trace << to_json_line({*now, SleepRecord{report}}) << '\n';
    }
    out << "pruned " << report.pruned << " decayed " << report.decayed << '\n';
    return kOk;
}

int cmd_validate(const std::string& store, const std::string& scenario, const std::string& ledger,
                 const std::string& trace, std::ostream& out) {
    if (store.empty() && scenario.empty() && ledger.empty() && trace.empty())
        throw UsageError("validate needs at least one of --store, --scenario, --ledger, --trace");
    if (!store.empty()) {
        const auto s = load_store(store);
        // Sub-schema references must resolve within the store.
        for (const auto& [id, schema] : s.schemata())
            for (const auto& slot : schema.slots)
                if (const auto* ref = std::get_if<SubSchema>(&slot.expectation); ref && !s.contains(ref->schema))
                    throw Error(ErrorCode::UnknownSchema,
                                "schema '" + id + "' references missing '" + ref->schema + "'");
        out << "ok store " << store << " (" << s.size() << " schemata)\n";
    }
    if (!scenario.empty()) {
        const auto sc = build_scenario(scenario);
        out << "ok scenario " << scenario << " (" << sc.ground.size() << " features)\n";
    }
    if (!ledger.empty()) {
        const auto l = load_ledger(ledger);
        out << "ok ledger " << ledger << " (" << l.candidates.size() << " candidates)\n";
    }
    if (!trace.empty()) {
        std::ifstream in(trace);
        if (!in) throw Error(ErrorCode::IoError, "cannot open trace '" + trace + "'");
        out << "ok trace " << trace << " (" << validate_trace(in) << " events)\n";
    }
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const Hooks& hooks) {
    EngineConfig config;
    try {
        apply_env_defaults(config);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kIoError;
    }

    CLI::App app{"Schema-driven iterative recognition engine"};
    app.require_subcommand(1);

    RunOptions run_opt;
    auto* run_cmd = app.add_subcommand("run", "Run one episode of a scenario against a store");
    run_cmd->add_option("--store", run_opt.store, "Schema store file")->required();
    run_cmd->add_option("--scenario", run_opt.scenario, "Scenario file")->required();
    run_cmd->add_option("--seed", run_opt.seed, "Seed for scenario jitter");
    run_cmd->add_option("--jitter", run_opt.jitter, "Uniform position jitter half-width");
    run_cmd->add_option("--max-ticks", run_opt.max_ticks, "Tick limit")->capture_default_str();
    run_cmd->add_option("--trace-out", run_opt.trace_out, "Write the JSONL trace here");
    run_cmd->add_option("--ledger", run_opt.ledger, "Record memory events into this ledger");
    run_cmd->add_option("--epoch", run_opt.epoch, "Offset added to recorded memory ticks");
    run_cmd->add_flag("--watch", run_opt.watch, "Keep perceiving after a conclusion");
    add_parameter_flags(*run_cmd, config);

    std::string store_path;
    std::string ledger_path;
    auto* cons_cmd = app.add_subcommand("consolidate", "Promote eligible candidates into the store");
    cons_cmd->add_option("--store", store_path)->required();
    cons_cmd->add_option("--ledger", ledger_path)->required();
    add_parameter_flags(*cons_cmd, config);

    std::optional<Tick> now;
    std::string sleep_trace;
    auto* sleep_cmd = app.add_subcommand("sleep", "Decay and prune unconsolidated candidates");
    sleep_cmd->add_option("--store", store_path)->required();
    sleep_cmd->add_option("--ledger", ledger_path)->required();
    sleep_cmd->add_option("--now", now, "Current tick (default: latest candidate tick)");
    sleep_cmd->add_option("--trace-out", sleep_trace, "Append a sleep event to this trace");
    add_parameter_flags(*sleep_cmd, config);

    std::string v_store, v_scenario, v_ledger, v_trace;
    auto* val_cmd = app.add_subcommand("validate", "Lint store, scenario, ledger or trace files");
    val_cmd->add_option("--store", v_store);
    val_cmd->add_option("--scenario", v_scenario);
    val_cmd->add_option("--ledger", v_ledger);
    val_cmd->add_option("--trace", v_trace);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }

    try {
        check_config(config);
        if (*run_cmd) return cmd_run(run_opt, config, out, err, hooks);
        if (*cons_cmd) return cmd_consolidate(store_path, ledger_path, config, out, hooks);
        if (*sleep_cmd) return cmd_sleep(store_path, ledger_path, now, sleep_trace, config, out, hooks);
        if (*val_cmd) return cmd_validate(v_store, v_scenario, v_ledger, v_trace, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kIoError;
    }
    return kUsage;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err, const Hooks& hooks) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, out, err, hooks);
}

}  // namespace ouroboros::cli
