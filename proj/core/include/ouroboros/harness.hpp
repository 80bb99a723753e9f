#pragma once
// Scenarios: ground features with reveal policies, attention answering and
// scan-path extraction.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ouroboros/matcher.hpp"
#include "ouroboros/trace.hpp"
#include "ouroboros/types.hpp"

namespace ouroboros {

enum class RevealKind { Initial, AtTick, OnRequest };

struct RevealPolicy {
    RevealKind kind = RevealKind::Initial;
    Tick at_tick = 0;       // AtTick only
    DimensionId dimension;  // OnRequest only
};

struct GroundFeature {
    FeatureDatum feature;
    RevealPolicy policy;
};

struct Scenario {
    std::string name;
    std::vector<GroundFeature> ground;
};

// Throws NoInitialFeature when nothing is revealed at the start.
void validate_scenario(const Scenario& scenario);

// Position jitter is uniform in [-jitter, jitter] and drawn from `seed` only.
Scenario read_scenario(std::istream& in, std::string name, std::uint64_t seed = 0,
                       double jitter = 0.0);
Scenario build_scenario(const std::filesystem::path& path, std::uint64_t seed = 0,
                        double jitter = 0.0);
void write_scenario(const Scenario& scenario, std::ostream& out);

struct Reveal {
    std::size_t ground_index = 0;
    FeatureDatum feature;
};

// Per-episode reveal state over an immutable scenario.
class ScenarioRun {
public:
    explicit ScenarioRun(const Scenario& scenario);

    // Initial features at tick 0 plus AtTick features scheduled for `tick`.
    std::vector<FeatureDatum> due(Tick tick) const;
    bool has_input_after(Tick tick) const;

    // First unrevealed OnRequest feature for the requested dimension.
    std::optional<Reveal> attend(const HighlightEntry& request, Tick tick);

    const Scenario& scenario() const noexcept { return *scenario_; }

private:
    const Scenario* scenario_;
    std::vector<bool> revealed_;
};

inline std::optional<Reveal> attend(ScenarioRun& run, const HighlightEntry& request, Tick tick) {
    return run.attend(request, tick);
}

struct ScanPoint {
    Tick tick = 0;
    Position position;
    DimensionId dimension;

    friend bool operator==(const ScanPoint&, const ScanPoint&) = default;
};

using ScanPath = std::vector<ScanPoint>;

// Positions of features revealed by attention requests, in trace order.
ScanPath scan_path(const EpisodeTrace& trace);

}  // namespace ouroboros
