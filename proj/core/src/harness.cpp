#include "ouroboros/harness.hpp"

#include <fstream>
#include <random>

#include "json_codec.hpp"
#include "ouroboros/error.hpp"

namespace ouroboros {

namespace {

// Portable uniform double in [0,1) from a 64-bit engine.
double unit_draw(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

RevealPolicy policy_from_json(const detail::json& j, std::size_t line) {
    if (!j.is_object() || !j.contains("kind")) throw ParseError(line, "policy needs a 'kind'");
    const auto kind = detail::get_string(j, "kind", line);
    RevealPolicy p;
    if (kind == "initial") {
        detail::check_keys(j, line, {"kind"}, {});
        p.kind = RevealKind::Initial;
    } else if (kind == "at_tick") {
        detail::check_keys(j, line, {"kind", "t"}, {});
        p.kind = RevealKind::AtTick;
        p.at_tick = detail::get_integer(j, "t", line);
        if (p.at_tick < 0) throw ParseError(line, "t must be >= 0");
    } else if (kind == "on_request") {
        detail::check_keys(j, line, {"kind", "dim"}, {});
        p.kind = RevealKind::OnRequest;
        p.dimension = DimensionId(detail::get_string(j, "dim", line));
        if (p.dimension.empty()) throw ParseError(line, "policy dim must be non-empty");
    } else {
        throw ParseError(line, "unknown policy kind '" + kind + "'");
    }
    return p;
}

detail::ordered_json policy_to_json(const RevealPolicy& p) {
    detail::ordered_json j;
    switch (p.kind) {
        case RevealKind::Initial: j["kind"] = "initial"; break;
        case RevealKind::AtTick:
            j["kind"] = "at_tick";
            j["t"] = p.at_tick;
            break;
        case RevealKind::OnRequest:
            j["kind"] = "on_request";
            j["dim"] = p.dimension.name();
            break;
    }
    return j;
}

}  // namespace

void validate_scenario(const Scenario& scenario) {
    bool seeded = false;
    for (const auto& g : scenario.ground) {
        validate_feature(g.feature);
        seeded = seeded || g.policy.kind == RevealKind::Initial;
    }
    if (!seeded)
        throw Error(ErrorCode::NoInitialFeature,
                    "scenario '" + scenario.name + "' reveals nothing at the start");
}

Scenario read_scenario(std::istream& in, std::string name, std::uint64_t seed, double jitter) {
    Scenario scenario;
    scenario.name = std::move(name);
    std::mt19937_64 rng(seed);
    detail::for_each_line(in, [&](const std::string& text, std::size_t line) {
        const auto j = detail::parse_line(text, line);
        detail::check_keys(j, line, {"dim", "value", "policy", "salience"}, {"pos"});
        GroundFeature g;
        g.feature.dimension = DimensionId(detail::get_string(j, "dim", line));
        if (g.feature.dimension.empty()) throw ParseError(line, "dim must be non-empty");
        g.feature.value = detail::value_from_json(j.at("value"), line);
        if (j.contains("pos")) {
            Position p = detail::position_from_json(j.at("pos"), line);
            if (jitter > 0.0) {
                p.x += jitter * (2.0 * unit_draw(rng) - 1.0);
                p.y += jitter * (2.0 * unit_draw(rng) - 1.0);
            }
            g.feature.position = p;
        }
        g.feature.salience = detail::get_number(j, "salience", line);
        if (g.feature.salience < 0.0 || g.feature.salience > 1.0)
            throw ParseError(line, "salience outside [0,1]");
        g.policy = policy_from_json(j.at("policy"), line);
        scenario.ground.push_back(std::move(g));
    });
    validate_scenario(scenario);
    return scenario;
}

Scenario build_scenario(const std::filesystem::path& path, std::uint64_t seed, double jitter) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open scenario '" + path.string() + "'");
    return read_scenario(in, path.stem().string(), seed, jitter);
}

void write_scenario(const Scenario& scenario, std::ostream& out) {
    for (const auto& g : scenario.ground) {
        detail::ordered_json j;
        j["dim"] = g.feature.dimension.name();
        j["value"] = detail::value_to_json(g.feature.value);
        if (g.feature.position) j["pos"] = detail::position_to_json(*g.feature.position);
        j["policy"] = policy_to_json(g.policy);
        j["salience"] = g.feature.salience;
        out << j.dump() << '\n';
    }
}

ScenarioRun::ScenarioRun(const Scenario& scenario)
    : scenario_(&scenario), revealed_(scenario.ground.size(), false) {}

std::vector<FeatureDatum> ScenarioRun::due(Tick tick) const {
    std::vector<FeatureDatum> out;
    for (const auto& g : scenario_->ground) {
        const bool now = (g.policy.kind == RevealKind::Initial && tick == 0) ||
                         (g.policy.kind == RevealKind::AtTick && g.policy.at_tick == tick);
        if (!now) continue;
        FeatureDatum f = g.feature;
        f.tick = tick;
        out.push_back(std::move(f));
    }
    return out;
}

bool ScenarioRun::has_input_after(Tick tick) const {
    for (const auto& g : scenario_->ground)
        if (g.policy.kind == RevealKind::AtTick && g.policy.at_tick > tick) return true;
    return false;
}

std::optional<Reveal> ScenarioRun::attend(const HighlightEntry& request, Tick tick) {
    for (std::size_t i = 0; i < scenario_->ground.size(); ++i) {
        const auto& g = scenario_->ground[i];
        if (revealed_[i] || g.policy.kind != RevealKind::OnRequest ||
            g.policy.dimension != request.dimension)
            continue;
        revealed_[i] = true;
        FeatureDatum f = g.feature;
        f.tick = tick;
        return Reveal{i, std::move(f)};
    }
    return std::nullopt;
}

ScanPath scan_path(const EpisodeTrace& trace) {
    ScanPath path;
    for (const auto& e : trace.events) {
        const auto* r = std::get_if<RequestEvent>(&e.payload);
        if (!r || !r->ground_index || !r->position) continue;
        path.push_back({e.tick, *r->position, r->dimension});
    }
    return path;
}

}  // namespace ouroboros
