#include "ouroboros/matcher.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "ouroboros/error.hpp"

namespace ouroboros {

namespace {

// Totals closer than this are treated as ties during assignment.
constexpr double kTieTolerance = 1e-9;
// Slack on threshold comparisons so that e.g. 3.24/3.6 counts as 0.9.
constexpr double kThresholdSlack = 1e-12;

void collect_group(const SchemaStore& store, const SchemaId& id, std::set<DimensionId>& group,
                   std::set<SchemaId>& visited) {
    if (!visited.insert(id).second) return;
    const Schema& sub = store.at(id);
    for (const auto& slot : sub.slots) {
        group.insert(slot.dimension);
        if (const auto* ref = std::get_if<SubSchema>(&slot.expectation))
            collect_group(store, ref->schema, group, visited);
    }
}

std::set<DimensionId> dimension_group(const Slot& slot, const SchemaStore& store) {
    std::set<DimensionId> group;
    std::set<SchemaId> visited;
    collect_group(store, std::get<SubSchema>(slot.expectation).schema, group, visited);
    return group;
}

double sub_schema_fit(const Slot& slot, const std::set<DimensionId>& group,
                      std::span<const FeatureDatum> context, const SchemaStore& store,
                      const MatcherParams& params, int depth) {
    if (depth + 1 > params.max_depth)
        throw Error(ErrorCode::DepthExceeded,
                    "schema nesting deeper than " + std::to_string(params.max_depth));
    std::vector<FeatureDatum> members;
    for (const auto& f : context)
        if (group.count(f.dimension)) members.push_back(f);
    const Schema& sub = store.at(std::get<SubSchema>(slot.expectation).schema);
    return consumption_analysis(sub, members, 0, store, params, depth + 1).fit;
}

bool names_part(const Slot& slot, const FeatureDatum& feature) {
    const auto* symbol = std::get_if<std::string>(&feature.value);
    return feature.dimension == slot.dimension && symbol &&
           *symbol == std::get<SubSchema>(slot.expectation).schema;
}

double match_flat(const Slot& slot, const FeatureDatum& feature) {
    if (feature.dimension != slot.dimension) return 0.0;
    if (const auto* e = std::get_if<ExactSymbol>(&slot.expectation)) {
        const auto* symbol = std::get_if<std::string>(&feature.value);
        return symbol && *symbol == e->symbol ? 1.0 : 0.0;
    }
    const auto& r = std::get<NumericRange>(slot.expectation);
    const auto* value = std::get_if<double>(&feature.value);
    if (!value) return 0.0;
    if (*value >= r.lo && *value <= r.hi) return 1.0;
    const double half_width = r.hi > r.lo ? (r.hi - r.lo) / 2.0 : 1.0;
    const double distance = *value < r.lo ? r.lo - *value : *value - r.hi;
    return std::max(0.0, 1.0 - distance / half_width);
}

}  // namespace

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Satisfied: return "satisfied";
        case Verdict::Gap: return "gap";
        case Verdict::Impasse: return "impasse";
    }
    return "gap";
}

double match_slot(const Slot& slot, const FeatureDatum& feature, const SchemaStore& store,
                  std::span<const FeatureDatum> context, const MatcherParams& params, int depth) {
    if (!std::holds_alternative<SubSchema>(slot.expectation)) return match_flat(slot, feature);
    if (names_part(slot, feature)) return 1.0;
    const auto group = dimension_group(slot, store);
    if (!group.count(feature.dimension)) return 0.0;
    if (context.empty()) context = std::span<const FeatureDatum>(&feature, 1);
    return sub_schema_fit(slot, group, context, store, params, depth);
}

std::vector<std::vector<double>> score_matrix(const Schema& schema,
                                              std::span<const FeatureDatum> features,
                                              const SchemaStore& store,
                                              const MatcherParams& params, int depth) {
    std::vector<std::vector<double>> scores(schema.slots.size(),
                                            std::vector<double>(features.size(), 0.0));
    for (std::size_t s = 0; s < schema.slots.size(); ++s) {
        const Slot& slot = schema.slots[s];
        if (!std::holds_alternative<SubSchema>(slot.expectation)) {
            for (std::size_t f = 0; f < features.size(); ++f)
                scores[s][f] = match_flat(slot, features[f]);
            continue;
        }
        // The group fit does not depend on which member carries the slot.
        const auto group = dimension_group(slot, store);
        std::optional<double> fit;
        for (std::size_t f = 0; f < features.size(); ++f) {
            if (names_part(slot, features[f])) {
                scores[s][f] = 1.0;
            } else if (group.count(features[f].dimension)) {
                if (!fit) fit = sub_schema_fit(slot, group, features, store, params, depth);
                scores[s][f] = *fit;
            }
        }
    }
    return scores;
}

std::vector<Binding> assign_exact(std::span<const double> weights,
                                  const std::vector<std::vector<double>>& scores) {
    const std::size_t n_slots = weights.size();
    const std::size_t n_features = scores.empty() ? 0 : scores.front().size();

    // Only features and slots with some positive score can take part.
    std::vector<std::size_t> slot_ids;
    std::vector<std::size_t> feature_ids;
    std::vector<bool> feature_used(n_features, false);
    for (std::size_t s = 0; s < n_slots; ++s) {
        bool any = false;
        for (std::size_t f = 0; f < n_features; ++f)
            if (scores[s][f] > 0.0) any = feature_used[f] = true;
        if (any) slot_ids.push_back(s);
    }
    for (std::size_t f = 0; f < n_features; ++f)
        if (feature_used[f]) feature_ids.push_back(f);

    const std::size_t n = slot_ids.size();
    const std::size_t m = feature_ids.size();
    if (n == 0) return {};
    if (m > 20) throw Error(ErrorCode::CapacityExceeded, "too many features for exact assignment");

    const std::size_t masks = std::size_t{1} << m;
    auto value = [&](std::size_t i, std::size_t j) {
        return weights[slot_ids[i]] * scores[slot_ids[i]][feature_ids[j]];
    };
    auto score = [&](std::size_t i, std::size_t j) {
        return scores[slot_ids[i]][feature_ids[j]];
    };

    // best[i * masks + used] = optimum over slots i.. with `used` features taken.
    std::vector<double> best((n + 1) * masks, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        double* row = &best[i * masks];
        const double* next = &best[(i + 1) * masks];
        for (std::size_t used = 0; used < masks; ++used) {
            double b = next[used];
            for (std::size_t j = 0; j < m; ++j) {
                const std::size_t bit = std::size_t{1} << j;
                if ((used & bit) || score(i, j) <= 0.0) continue;
                b = std::max(b, value(i, j) + next[used | bit]);
            }
            row[used] = b;
        }
    }

    // Walk forward preferring the lowest feature, then leaving the slot empty.
    std::vector<Binding> bindings;
    std::size_t used = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double target = best[i * masks + used] - kTieTolerance;
        const double* next = &best[(i + 1) * masks];
        bool bound = false;
        for (std::size_t j = 0; j < m && !bound; ++j) {
            const std::size_t bit = std::size_t{1} << j;
            if ((used & bit) || score(i, j) <= 0.0) continue;
            if (value(i, j) + next[used | bit] >= target) {
                bindings.push_back({slot_ids[i], feature_ids[j], score(i, j)});
                used |= bit;
                bound = true;
            }
        }
    }
    return bindings;
}

std::vector<Binding> bind_features(const Schema& schema, std::span<const FeatureDatum> features,
                                   const SchemaStore& store, const MatcherParams& params,
                                   int depth) {
    if (schema.slots.size() > params.max_slots)
        throw Error(ErrorCode::CapacityExceeded,
                    "schema '" + schema.id + "' has " + std::to_string(schema.slots.size()) +
                        " slots, cap is " + std::to_string(params.max_slots));
    if (features.size() > params.max_features)
        throw Error(ErrorCode::CapacityExceeded,
                    std::to_string(features.size()) + " features, cap is " +
                        std::to_string(params.max_features));
    std::vector<double> weights;
    weights.reserve(schema.slots.size());
    for (const auto& s : schema.slots) weights.push_back(s.weight);
    return assign_exact(weights, score_matrix(schema, features, store, params, depth));
}

Verdict classify(const Schema& schema, double fit, std::span<const Binding> bindings,
                 int iteration, const MatcherParams& params) {
    bool critical_bound = true;
    for (std::size_t s = 0; s < schema.slots.size() && critical_bound; ++s) {
        if (schema.slots[s].weight < params.w_crit) continue;
        critical_bound = std::any_of(bindings.begin(), bindings.end(), [&](const Binding& b) {
            return b.slot_index == s && b.score >= 0.5;
        });
    }
    if (fit + kThresholdSlack >= params.theta_sat && critical_bound) return Verdict::Satisfied;
    if (fit + kThresholdSlack < params.theta_imp && iteration >= 1) return Verdict::Impasse;
    return Verdict::Gap;
}

ConsumptionReport consumption_analysis(const Schema& schema,
                                       std::span<const FeatureDatum> features, int iteration,
                                       const SchemaStore& store, const MatcherParams& params,
                                       int depth) {
    ConsumptionReport report;
    report.schema_id = schema.id;
    report.bindings = bind_features(schema, features, store, params, depth);

    std::vector<bool> slot_bound(schema.slots.size(), false);
    std::vector<bool> feature_bound(features.size(), false);
    double bound_weight = 0.0;
    for (const auto& b : report.bindings) {
        slot_bound[b.slot_index] = true;
        feature_bound[b.feature_index] = true;
        bound_weight += schema.slots[b.slot_index].weight * b.score;
    }
    report.fit = std::clamp(bound_weight / schema.total_weight(), 0.0, 1.0);

    for (std::size_t s = 0; s < schema.slots.size(); ++s)
        if (!slot_bound[s]) report.empty_slots.push_back(s);
    std::stable_sort(report.empty_slots.begin(), report.empty_slots.end(),
                     [&](std::size_t a, std::size_t b) {
                         return schema.slots[a].weight > schema.slots[b].weight;
                     });
    for (std::size_t f = 0; f < features.size(); ++f)
        if (!feature_bound[f]) report.unexplained.push_back(f);

    report.verdict = classify(schema, report.fit, report.bindings, iteration, params);
    return report;
}

ConsumptionReport consumption_analysis(const SchemaStore& store, const SchemaId& schema_id,
                                       std::span<const FeatureDatum> features, int iteration,
                                       const MatcherParams& params) {
    return consumption_analysis(store.at(schema_id), features, iteration, store, params, 0);
}

std::vector<HighlightEntry> highlight_slots(const ConsumptionReport& report, const Schema& schema) {
    std::vector<HighlightEntry> out;
    if (report.verdict == Verdict::Satisfied) return out;
    for (std::size_t s : report.empty_slots) {
        const Slot& slot = schema.slots.at(s);
        out.push_back({slot.dimension, slot.expectation, slot.weight, s});
    }
    return out;
}

}  // namespace ouroboros
