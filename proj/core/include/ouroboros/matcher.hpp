#pragma once
// Slot scoring, exclusive feature binding and consumption analysis.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ouroboros/params.hpp"
#include "ouroboros/schema_store.hpp"
#include "ouroboros/types.hpp"

namespace ouroboros {

struct Binding {
    std::size_t slot_index = 0;
    std::size_t feature_index = 0;
    double score = 0.0;

    friend bool operator==(const Binding&, const Binding&) = default;
};

enum class Verdict { Satisfied, Gap, Impasse };

std::string to_string(Verdict v);

struct ConsumptionReport {
    SchemaId schema_id;
    double fit = 0.0;
    std::vector<Binding> bindings;       // ordered by slot index
    std::vector<std::size_t> empty_slots;  // descending weight, ties by index
    std::vector<std::size_t> unexplained;  // ascending feature index
    Verdict verdict = Verdict::Gap;
};

struct HighlightEntry {
    DimensionId dimension;
    Expectation expectation;
    double weight = 0.0;
    std::size_t slot_index = 0;

    friend bool operator==(const HighlightEntry&, const HighlightEntry&) = default;
};

// Score in [0,1] of one feature against one slot.
//   ExactSymbol:  1 on equal symbol, else 0.
//   NumericRange: 1 inside [lo,hi], falling linearly to 0 at half the range
//                 width outside (width 1 for lo == hi).
//   SubSchema:    the slot's dimension names a group made of itself and every
//                 dimension the sub-schema uses (recursively). A feature in the
//                 group scores the fit of the sub-schema against all group
//                 features in `context`.
// Throws DepthExceeded once nesting passes params.max_depth.
double match_slot(const Slot& slot, const FeatureDatum& feature, const SchemaStore& store,
                  std::span<const FeatureDatum> context = {}, const MatcherParams& params = {},
                  int depth = 0);

// Score matrix [slot][feature] as used by bind_features.
std::vector<std::vector<double>> score_matrix(const Schema& schema,
                                              std::span<const FeatureDatum> features,
                                              const SchemaStore& store,
                                              const MatcherParams& params = {}, int depth = 0);

// Exact maximum of sum(weight[slot] * score[slot][feature]) over partial
// injective slot<-feature maps. Only positive scores bind. Among optimal maps
// the lexicographically smallest (slot, feature) list wins.
std::vector<Binding> assign_exact(std::span<const double> weights,
                                  const std::vector<std::vector<double>>& scores);

// Throws CapacityExceeded above the configured slot/feature caps.
std::vector<Binding> bind_features(const Schema& schema, std::span<const FeatureDatum> features,
                                   const SchemaStore& store, const MatcherParams& params = {},
                                   int depth = 0);

// Verdict from fit and bindings alone:
//   Satisfied: fit >= theta_sat and every slot with weight >= w_crit is bound
//              with score >= 0.5.
//   Impasse:   fit < theta_imp and iteration >= 1.
//   Gap:       otherwise.
Verdict classify(const Schema& schema, double fit, std::span<const Binding> bindings,
                 int iteration, const MatcherParams& params = {});

ConsumptionReport consumption_analysis(const Schema& schema,
                                       std::span<const FeatureDatum> features, int iteration,
                                       const SchemaStore& store, const MatcherParams& params = {},
                                       int depth = 0);

// Throws UnknownSchema when the id is not in the store.
ConsumptionReport consumption_analysis(const SchemaStore& store, const SchemaId& schema_id,
                                       std::span<const FeatureDatum> features, int iteration,
                                       const MatcherParams& params = {});

// The attention bid: one entry per empty slot in report order. Empty when
// the report is Satisfied.
std::vector<HighlightEntry> highlight_slots(const ConsumptionReport& report, const Schema& schema);

}  // namespace ouroboros
