#pragma once
// Tunable parameters with their documented defaults. Every field can be
// overridden from the command line; validate() enforces the ranges.

#include <cstddef>
#include <optional>
#include <string>

#include "ouroboros/types.hpp"

namespace ouroboros {

struct ActivationParams {
    double gamma = 0.5;   // arousal-congruence discount
    double floor = 0.05;  // minimum activation for a winner
};

struct MatcherParams {
    double theta_sat = 0.9;
    double theta_imp = 0.2;
    double w_crit = 0.8;
    std::size_t max_slots = 16;
    std::size_t max_features = 16;
    int max_depth = 8;
};

struct MonitorParams {
    double alpha = 0.5;  // confidence gain on improvement
    double beta = 0.1;   // tension gain on misfit
    double rho = 0.8;    // share of tension released at success
    int base = 5;        // timeout budget base
};

struct LoopParams {
    int n_flip = 10;
    double delta = 0.1;
    double epsilon = 0.01;
    int b_min = 3;
    int b_max = 30;
    double impasse_tension_retained = 0.5;
};

struct MemoryParams {
    std::size_t window = 8;
    double tau_instant = 0.8;
    double repetition_increment = 0.2;
    double numeric_tolerance = 0.1;
    double min_slot_weight = 0.01;
    double sleep_decay = 0.9;
    double prune_strength = 0.3;
    Tick prune_age = 100;
    bool record_success = true;
};

struct EngineConfig {
    ActivationParams activation;
    MatcherParams matcher;
    MonitorParams monitor;
    LoopParams loop;
    MemoryParams memory;

    // Returns a diagnostic naming the first out-of-range parameter.
    std::optional<std::string> validate() const;
};

}  // namespace ouroboros
