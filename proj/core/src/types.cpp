#include "ouroboros/types.hpp"

#include <cmath>
#include <sstream>

#include "ouroboros/error.hpp"

namespace ouroboros {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::DuplicateId: return "DuplicateId";
        case ErrorCode::InvalidSchema: return "InvalidSchema";
        case ErrorCode::UnknownSchema: return "UnknownSchema";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::DepthExceeded: return "DepthExceeded";
        case ErrorCode::CapacityExceeded: return "CapacityExceeded";
        case ErrorCode::NoCurrentSchema: return "NoCurrentSchema";
        case ErrorCode::EmptyWindow: return "EmptyWindow";
        case ErrorCode::NoInitialFeature: return "NoInitialFeature";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Error";
}

std::string expectation_kind(const Expectation& e) {
    switch (e.index()) {
        case 0: return "exact";
        case 1: return "range";
        default: return "sub";
    }
}

std::string to_string(Provenance p) {
    switch (p) {
        case Provenance::Innate: return "innate";
        case Provenance::LearnedImpasse: return "learned_impasse";
        case Provenance::LearnedSuccess: return "learned_success";
    }
    return "innate";
}

std::optional<Provenance> provenance_from_string(const std::string& s) {
    if (s == "innate") return Provenance::Innate;
    if (s == "learned_impasse") return Provenance::LearnedImpasse;
    if (s == "learned_success") return Provenance::LearnedSuccess;
    return std::nullopt;
}

double Schema::total_weight() const {
    double total = 0.0;
    for (const auto& s : slots) total += s.weight;
    return total;
}

namespace {

[[noreturn]] void invalid(const Schema& schema, const std::string& what) {
    throw Error(ErrorCode::InvalidSchema, "schema '" + schema.id + "': " + what);
}

bool unit(double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; }

}  // namespace

void validate_schema(const Schema& schema) {
    if (schema.id.empty()) invalid(schema, "id must be non-empty");
    if (schema.slots.empty()) invalid(schema, "slots must be non-empty");
    for (std::size_t i = 0; i < schema.slots.size(); ++i) {
        const Slot& slot = schema.slots[i];
        const std::string where = "slot " + std::to_string(i) + ": ";
        if (slot.dimension.empty()) invalid(schema, where + "dimension must be non-empty");
        if (!(std::isfinite(slot.weight) && slot.weight > 0.0 && slot.weight <= 1.0))
            invalid(schema, where + "weight must lie in (0,1]");
        if (slot.temporal_offset && *slot.temporal_offset < 0)
            invalid(schema, where + "temporal offset must be >= 0");
        if (const auto* r = std::get_if<NumericRange>(&slot.expectation)) {
            if (!std::isfinite(r->lo) || !std::isfinite(r->hi) || r->lo > r->hi)
                invalid(schema, where + "range requires lo <= hi");
        } else if (const auto* e = std::get_if<ExactSymbol>(&slot.expectation)) {
            if (e->symbol.empty()) invalid(schema, where + "symbol must be non-empty");
        } else if (std::get<SubSchema>(slot.expectation).schema.empty()) {
            invalid(schema, where + "sub-schema reference must be non-empty");
        }
    }
    if (!(schema.total_weight() > 0.0)) invalid(schema, "total weight must be positive");
    if (!unit(schema.arousal_expectation)) invalid(schema, "arousal must lie in [0,1]");
    if (!unit(schema.strength)) invalid(schema, "strength must lie in [0,1]");
}

std::string to_string(const FeatureValue& v) {
    if (const auto* s = std::get_if<std::string>(&v)) return *s;
    std::ostringstream os;
    os << std::get<double>(v);
    return os.str();
}

void validate_feature(const FeatureDatum& feature) {
    if (feature.dimension.empty())
        throw Error(ErrorCode::InvalidArgument, "feature dimension must be non-empty");
    if (!unit(feature.salience))
        throw Error(ErrorCode::InvalidArgument, "feature salience must lie in [0,1]");
    if (feature.tick < 0) throw Error(ErrorCode::InvalidArgument, "feature tick must be >= 0");
    if (const auto* d = std::get_if<double>(&feature.value); d && !std::isfinite(*d))
        throw Error(ErrorCode::InvalidArgument, "feature value must be finite");
}

}  // namespace ouroboros
