#pragma once
// JSON conversions shared by the file formats. Private to the library.

#include <cstddef>
#include <initializer_list>
#include <string>
#include <string_view>

#include "json.hpp"
#include "ouroboros/types.hpp"

namespace ouroboros::detail {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

// Rejects any key outside `allowed` and any missing key in `required`.
void check_keys(const json& obj, std::size_t line, std::initializer_list<std::string_view> required,
                std::initializer_list<std::string_view> optional);

json parse_line(const std::string& text, std::size_t line);

double get_number(const json& obj, const char* key, std::size_t line);
std::string get_string(const json& obj, const char* key, std::size_t line);
std::int64_t get_integer(const json& obj, const char* key, std::size_t line);

ordered_json expectation_to_json(const Expectation& e);
Expectation expectation_from_json(const json& j, std::size_t line);

ordered_json schema_to_json(const Schema& schema);
// Accepts the schema keys plus `extra` (validated by the caller).
Schema schema_from_json(const json& j, std::size_t line,
                        std::initializer_list<std::string_view> extra = {});

ordered_json value_to_json(const FeatureValue& v);
FeatureValue value_from_json(const json& j, std::size_t line);

ordered_json position_to_json(const Position& p);
Position position_from_json(const json& j, std::size_t line);

ordered_json feature_to_json(const FeatureDatum& f);

// Iterates non-blank lines, passing (text, 1-based line number).
template <class Fn>
void for_each_line(std::istream& in, Fn&& fn) {
    std::string text;
    std::size_t line = 0;
    while (std::getline(in, text)) {
        ++line;
        if (!text.empty() && text.back() == '\r') text.pop_back();
        if (text.find_first_not_of(" \t") == std::string::npos) continue;
        fn(text, line);
    }
}

}  // namespace ouroboros::detail
