#include "json_codec.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ouroboros/error.hpp"

namespace ouroboros::detail {

void check_keys(const json& obj, std::size_t line, std::initializer_list<std::string_view> required,
                std::initializer_list<std::string_view> optional) {
    if (!obj.is_object()) throw ParseError(line, "expected a JSON object");
    for (const auto& [key, value] : obj.items()) {
        auto known = [&](std::initializer_list<std::string_view> keys) {
            return std::find(keys.begin(), keys.end(), key) != keys.end();
        };
        if (!known(required) && !known(optional)) throw ParseError(line, "unknown field '" + key + "'");
    }
    for (auto key : required)
        if (!obj.contains(std::string(key)))
            throw ParseError(line, "missing field '" + std::string(key) + "'");
}

json parse_line(const std::string& text, std::size_t line) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(line, std::string("malformed JSON: ") + e.what());
    }
}

double get_number(const json& obj, const char* key, std::size_t line) {
    const json& v = obj.at(key);
    if (!v.is_number()) throw ParseError(line, std::string("field '") + key + "' must be a number");
    double d = v.get<double>();
    if (!std::isfinite(d)) throw ParseError(line, std::string("field '") + key + "' must be finite");
    return d;
}

std::string get_string(const json& obj, const char* key, std::size_t line) {
    const json& v = obj.at(key);
    if (!v.is_string()) throw ParseError(line, std::string("field '") + key + "' must be a string");
    return v.get<std::string>();
}

std::int64_t get_integer(const json& obj, const char* key, std::size_t line) {
    const json& v = obj.at(key);
    if (!v.is_number_integer())
        throw ParseError(line, std::string("field '") + key + "' must be an integer");
    return v.get<std::int64_t>();
}

ordered_json expectation_to_json(const Expectation& e) {
    ordered_json j;
    j["kind"] = expectation_kind(e);
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, ExactSymbol>) {
                j["symbol"] = x.symbol;
            } else if constexpr (std::is_same_v<T, NumericRange>) {
                j["lo"] = x.lo;
                j["hi"] = x.hi;
            } else {
                j["schema"] = x.schema;
            }
        },
        e);
    return j;
}

Expectation expectation_from_json(const json& j, std::size_t line) {
    if (!j.is_object() || !j.contains("kind")) throw ParseError(line, "expectation needs a 'kind'");
    const std::string kind = get_string(j, "kind", line);
    if (kind == "exact") {
        check_keys(j, line, {"kind", "symbol"}, {});
        auto symbol = get_string(j, "symbol", line);
        if (symbol.empty()) throw ParseError(line, "symbol must be non-empty");
        return ExactSymbol{symbol};
    }
    if (kind == "range") {
        check_keys(j, line, {"kind", "lo", "hi"}, {});
        NumericRange r{get_number(j, "lo", line), get_number(j, "hi", line)};
        if (r.lo > r.hi) throw ParseError(line, "range requires lo <= hi");
        return r;
    }
    if (kind == "sub") {
        check_keys(j, line, {"kind", "schema"}, {});
        auto id = get_string(j, "schema", line);
        if (id.empty()) throw ParseError(line, "sub-schema reference must be non-empty");
        return SubSchema{id};
    }
    throw ParseError(line, "unknown expectation kind '" + kind + "'");
}

ordered_json schema_to_json(const Schema& schema) {
    ordered_json j;
    j["id"] = schema.id;
    ordered_json slots = ordered_json::array();
    for (const auto& s : schema.slots) {
        ordered_json js;
        js["dim"] = s.dimension.name();
        js["expect"] = expectation_to_json(s.expectation);
        js["weight"] = s.weight;
        if (s.temporal_offset) js["offset"] = *s.temporal_offset;
        slots.push_back(std::move(js));
    }
    j["slots"] = std::move(slots);
    j["arousal"] = schema.arousal_expectation;
    j["strength"] = schema.strength;
    j["provenance"] = to_string(schema.provenance);
    j["created"] = schema.created_tick;
    return j;
}

Schema schema_from_json(const json& j, std::size_t line,
                        std::initializer_list<std::string_view> extra) {
    std::vector<std::string_view> optional{"created"};
    optional.insert(optional.end(), extra.begin(), extra.end());
    if (!j.is_object()) throw ParseError(line, "expected a JSON object");
    for (const auto& [key, value] : j.items()) {
        static constexpr std::string_view base[] = {"id", "slots", "arousal", "strength",
                                                    "provenance"};
        if (std::find(std::begin(base), std::end(base), key) == std::end(base) &&
            std::find(optional.begin(), optional.end(), key) == optional.end())
            throw ParseError(line, "unknown field '" + key + "'");
    }
    for (const char* key : {"id", "slots", "arousal", "strength", "provenance"})
        if (!j.contains(key)) throw ParseError(line, std::string("missing field '") + key + "'");

    Schema s;
    s.id = get_string(j, "id", line);
    if (s.id.empty()) throw ParseError(line, "id must be non-empty");
    const json& slots = j.at("slots");
    if (!slots.is_array() || slots.empty()) throw ParseError(line, "slots must be a non-empty array");
    for (const auto& js : slots) {
        check_keys(js, line, {"dim", "expect", "weight"}, {"offset"});
        Slot slot;
        slot.dimension = DimensionId(get_string(js, "dim", line));
        if (slot.dimension.empty()) throw ParseError(line, "dim must be non-empty");
        slot.expectation = expectation_from_json(js.at("expect"), line);
        slot.weight = get_number(js, "weight", line);
        if (!(slot.weight > 0.0 && slot.weight <= 1.0)) {
            std::ostringstream os;
            os << "weight " << slot.weight << " outside (0,1]";
            throw ParseError(line, os.str());
        }
        if (js.contains("offset")) {
            slot.temporal_offset = get_integer(js, "offset", line);
            if (*slot.temporal_offset < 0) throw ParseError(line, "offset must be >= 0");
        }
        s.slots.push_back(std::move(slot));
    }
    s.arousal_expectation = get_number(j, "arousal", line);
    if (s.arousal_expectation < 0.0 || s.arousal_expectation > 1.0)
        throw ParseError(line, "arousal outside [0,1]");
    s.strength = get_number(j, "strength", line);
    if (s.strength < 0.0 || s.strength > 1.0) throw ParseError(line, "strength outside [0,1]");
    auto prov = provenance_from_string(get_string(j, "provenance", line));
    if (!prov) throw ParseError(line, "unknown provenance");
    s.provenance = *prov;
    if (j.contains("created")) s.created_tick = get_integer(j, "created", line);
    return s;
}

ordered_json value_to_json(const FeatureValue& v) {
    if (const auto* s = std::get_if<std::string>(&v)) return *s;
    return std::get<double>(v);
}

FeatureValue value_from_json(const json& j, std::size_t line) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_number()) {
        double d = j.get<double>();
        if (!std::isfinite(d)) throw ParseError(line, "value must be finite");
        return d;
    }
    throw ParseError(line, "value must be a string or a number");
}

ordered_json position_to_json(const Position& p) { return ordered_json::array({p.x, p.y}); }

Position position_from_json(const json& j, std::size_t line) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ParseError(line, "pos must be [x, y]");
    return {j[0].get<double>(), j[1].get<double>()};
}

ordered_json feature_to_json(const FeatureDatum& f) {
    ordered_json j;
    j["dim"] = f.dimension.name();
    j["value"] = value_to_json(f.value);
    if (f.position) j["pos"] = position_to_json(*f.position);
    j["tick"] = f.tick;
    j["salience"] = f.salience;
    return j;
}

}  // namespace ouroboros::detail
