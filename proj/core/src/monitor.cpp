#include "ouroboros/monitor.hpp"

#include <algorithm>
#include <cmath>

namespace ouroboros {

namespace {

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

}  // namespace

MonitorState update_monitor(MonitorState m, const ConsumptionReport& report,
                            const MonitorParams& params) {
    const double gain = report.fit - m.last_fit.value_or(0.0);
    m.confidence = clamp01(m.confidence + params.alpha * std::max(gain, 0.0));
    if (report.verdict != Verdict::Satisfied)
        m.tension = clamp01(m.tension + params.beta * (1.0 - report.fit));
    m.arousal = m.tension;
    m.last_fit = report.fit;
    return m;
}

TensionRelease release_tension(MonitorState m, const MonitorParams& params) {
    const double released = params.rho * m.tension;
    m.tension = clamp01(m.tension - released);
    m.arousal = m.tension;
    return {m, released};
}

int timeout_budget(const MonitorState& m, double schema_strength, int n_candidates,
                   const MonitorParams& params) {
    const double rivals = std::min(std::max(n_candidates, 0), 5) / 5.0;
    const double budget = params.base * (1.0 + m.confidence) * (1.0 + schema_strength) /
                          ((1.0 + m.tension) * (1.0 + rivals));
    return std::max(1, static_cast<int>(std::lround(budget)));
}

MonitorState on_adoption(MonitorState m) {
    m.confidence = 0.0;
    m.last_fit.reset();
    return m;
}

MonitorState register_interrupt(MonitorState m, const MonitorParams& params) {
    ++m.interrupts_recent;
    m.tension = clamp01(m.tension + params.beta);
    m.arousal = m.tension;
    return m;
}

}  // namespace ouroboros
