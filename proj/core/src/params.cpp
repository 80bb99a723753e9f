#include "ouroboros/params.hpp"

#include <cmath>

namespace ouroboros {

namespace {

bool in_unit(double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; }
bool in_open_unit(double v) { return std::isfinite(v) && v > 0.0 && v <= 1.0; }

}  // namespace

std::optional<std::string> EngineConfig::validate() const {
    if (!in_unit(activation.gamma)) return "gamma must lie in [0,1]";
    if (!in_unit(activation.floor)) return "floor must lie in [0,1]";
    if (!in_open_unit(matcher.theta_sat)) return "theta-sat must lie in (0,1]";
    if (!in_unit(matcher.theta_imp)) return "theta-imp must lie in [0,1]";
    if (matcher.theta_imp > matcher.theta_sat) return "theta-imp must not exceed theta-sat";
    if (!in_open_unit(matcher.w_crit)) return "w-crit must lie in (0,1]";
    if (matcher.max_slots < 1 || matcher.max_slots > 16) return "max-slots must lie in [1,16]";
    if (matcher.max_features < 1 || matcher.max_features > 16)
        return "max-features must lie in [1,16]";
    if (matcher.max_depth < 0) return "max-depth must be >= 0";
    if (!in_unit(monitor.alpha)) return "alpha must lie in [0,1]";
    if (!in_unit(monitor.beta)) return "beta must lie in [0,1]";
    if (!in_unit(monitor.rho)) return "rho must lie in [0,1]";
    if (monitor.base < 1) return "base must be >= 1";
    if (loop.n_flip < 1) return "n-flip must be >= 1";
    if (!in_unit(loop.delta)) return "delta must lie in [0,1]";
    if (!(std::isfinite(loop.epsilon) && loop.epsilon >= 0.0)) return "epsilon must be >= 0";
    if (loop.b_min < 0) return "b-min must be >= 0";
    if (loop.b_max < loop.b_min) return "b-max must be >= b-min";
    if (!in_unit(loop.impasse_tension_retained)) return "impasse retention must lie in [0,1]";
    if (memory.window < 1) return "window must be >= 1";
    if (!in_unit(memory.tau_instant)) return "tau-instant must lie in [0,1]";
    if (!in_unit(memory.repetition_increment)) return "repetition increment must lie in [0,1]";
    if (!in_unit(memory.numeric_tolerance)) return "numeric tolerance must lie in [0,1]";
    if (!in_open_unit(memory.min_slot_weight)) return "min slot weight must lie in (0,1]";
    if (!in_unit(memory.sleep_decay)) return "sleep decay must lie in [0,1]";
    if (!in_unit(memory.prune_strength)) return "prune strength must lie in [0,1]";
    if (memory.prune_age < 0) return "prune age must be >= 0";
    return std::nullopt;
}

}  // namespace ouroboros
