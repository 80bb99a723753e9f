#pragma once
// Core domain types: features, expectations, slots and schemata.

#include <cstdint>
#include <compare>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace ouroboros {

using Tick = std::int64_t;
using SchemaId = std::string;

// Name of a feature dimension ("eye", "colour", ...). Equality is by name.
class DimensionId {
public:
    DimensionId() = default;
    explicit DimensionId(std::string name) : name_(std::move(name)) {}

    const std::string& name() const noexcept { return name_; }
    bool empty() const noexcept { return name_.empty(); }

    friend bool operator==(const DimensionId&, const DimensionId&) = default;
    friend auto operator<=>(const DimensionId&, const DimensionId&) = default;

private:
    std::string name_;
};

struct ExactSymbol {
    std::string symbol;
    friend bool operator==(const ExactSymbol&, const ExactSymbol&) = default;
};

struct NumericRange {
    double lo = 0.0;
    double hi = 0.0;
    friend bool operator==(const NumericRange&, const NumericRange&) = default;
};

struct SubSchema {
    SchemaId schema;
    friend bool operator==(const SubSchema&, const SubSchema&) = default;
};

using Expectation = std::variant<ExactSymbol, NumericRange, SubSchema>;

std::string expectation_kind(const Expectation& e);

struct Slot {
    DimensionId dimension;
    Expectation expectation;
    double weight = 1.0;
    std::optional<Tick> temporal_offset;

    friend bool operator==(const Slot&, const Slot&) = default;
};

enum class Provenance { Innate, LearnedImpasse, LearnedSuccess };

std::string to_string(Provenance p);
std::optional<Provenance> provenance_from_string(const std::string& s);

struct Schema {
    SchemaId id;
    std::vector<Slot> slots;
    double arousal_expectation = 0.0;
    double strength = 0.0;
    Provenance provenance = Provenance::Innate;
    Tick created_tick = 0;

    double total_weight() const;

    friend bool operator==(const Schema&, const Schema&) = default;
};

// Throws Error(InvalidSchema) naming the first violated invariant.
void validate_schema(const Schema& schema);

struct Position {
    double x = 0.0;
    double y = 0.0;
    friend bool operator==(const Position&, const Position&) = default;
};

using FeatureValue = std::variant<std::string, double>;

std::string to_string(const FeatureValue& v);

struct FeatureDatum {
    DimensionId dimension;
    FeatureValue value;
    std::optional<Position> position;
    Tick tick = 0;
    double salience = 1.0;

    friend bool operator==(const FeatureDatum&, const FeatureDatum&) = default;
};

void validate_feature(const FeatureDatum& feature);

}  // namespace ouroboros
