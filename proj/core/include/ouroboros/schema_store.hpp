#pragma once
// Schema storage, bottom-up activation and winner-take-all selection.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "ouroboros/params.hpp"
#include "ouroboros/types.hpp"

namespace ouroboros {

// Holds all schemata keyed by id. Iteration order is lexicographic by id.
// The store is treated as immutable while an episode runs.
class SchemaStore {
public:
    // Validates and inserts. Throws DuplicateId or InvalidSchema.
    const SchemaId& insert(Schema schema);

    const Schema* find(const SchemaId& id) const;
    // Throws UnknownSchema.
    const Schema& at(const SchemaId& id) const;
    bool contains(const SchemaId& id) const { return schemata_.count(id) != 0; }

    std::size_t size() const noexcept { return schemata_.size(); }
    bool empty() const noexcept { return schemata_.empty(); }

    const std::map<SchemaId, Schema>& schemata() const noexcept { return schemata_; }

    friend bool operator==(const SchemaStore&, const SchemaStore&) = default;

private:
    std::map<SchemaId, Schema> schemata_;
};

struct ActivationEntry {
    SchemaId schema_id;
    double activation = 0.0;
    double raw_match = 0.0;
};

// raw_match is the weight-normalised exclusive-assignment fit of each schema
// against the features; activation discounts it by arousal incongruence:
//   activation = raw_match * (1 - gamma * |arousal_expectation - arousal|)
// Bypassed schemata are skipped. Sorted by descending activation, ties by id.
std::vector<ActivationEntry> candidate_activations(const SchemaStore& store,
                                                   std::span<const FeatureDatum> features,
                                                   const std::set<SchemaId>& bypass,
                                                   double arousal,
                                                   const ActivationParams& activation = {},
                                                   const MatcherParams& matcher = {});

// First entry at or above the floor; the list must already be ranked.
std::optional<SchemaId> select_winner(std::span<const ActivationEntry> ranked,
                                      double floor = ActivationParams{}.floor);

// Line-oriented JSON schema files.
SchemaStore read_store(std::istream& in);
void write_store(const SchemaStore& store, std::ostream& out);
SchemaStore load_store(const std::filesystem::path& path);
// Writes through a temporary file and renames it into place.
void save_store(const SchemaStore& store, const std::filesystem::path& path);

}  // namespace ouroboros
