#pragma once
// Confidence/tension bookkeeping and the adaptive timeout budget.

#include <optional>

#include "ouroboros/matcher.hpp"
#include "ouroboros/params.hpp"

namespace ouroboros {

// Levels stay in [0,1]; arousal mirrors tension after every update.
struct MonitorState {
    double confidence = 0.0;
    double tension = 0.0;
    double arousal = 0.0;
    std::optional<double> last_fit;
    int interrupts_recent = 0;

    friend bool operator==(const MonitorState&, const MonitorState&) = default;
};

MonitorState update_monitor(MonitorState m, const ConsumptionReport& report,
                            const MonitorParams& params = {});

struct TensionRelease {
    MonitorState state;
    double released = 0.0;
};

// Releases rho * tension. Confidence is left as is.
TensionRelease release_tension(MonitorState m, const MonitorParams& params = {});

// max(1, round(base * (1+confidence) * (1+strength) /
//              ((1+tension) * (1+min(n_candidates,5)/5))))
int timeout_budget(const MonitorState& m, double schema_strength, int n_candidates,
                   const MonitorParams& params = {});

// Confidence is held in the selected schema, so it restarts on adoption.
MonitorState on_adoption(MonitorState m);

// An unrequested input arriving mid-episode. Counts the interrupt and adds
// beta to tension.
MonitorState register_interrupt(MonitorState m, const MonitorParams& params = {});

}  // namespace ouroboros
