#pragma once
// Builders shared by the unit and acceptance suites.

#include <filesystem>
#include <initializer_list>
#include <random>
#include <string>
#include <vector>

#include "ouroboros/error.hpp"
#include "ouroboros/schema_store.hpp"
#include "ouroboros/types.hpp"

namespace ouroboros::testing {

inline Slot exact_slot(const std::string& dim, const std::string& symbol, double weight) {
    return {DimensionId(dim), ExactSymbol{symbol}, weight, std::nullopt};
}

inline Slot range_slot(const std::string& dim, double lo, double hi, double weight) {
    return {DimensionId(dim), NumericRange{lo, hi}, weight, std::nullopt};
}

inline FeatureDatum symbol(const std::string& dim, const std::string& value, Tick tick = 0,
                           double salience = 1.0) {
    return {DimensionId(dim), value, std::nullopt, tick, salience};
}

inline FeatureDatum number(const std::string& dim, double value, Tick tick = 0,
                           double salience = 1.0) {
    return {DimensionId(dim), value, std::nullopt, tick, salience};
}

inline Schema make_schema(std::string id, std::vector<Slot> slots, double arousal = 0.0,
                          double strength = 0.5) {
    Schema s;
    s.id = std::move(id);
    s.slots = std::move(slots);
    s.arousal_expectation = arousal;
    s.strength = strength;
    return s;
}

// FACE{eye .9, eye .9, nose .7, mouth .7, ear .4}
inline Schema face_schema(double arousal = 0.0) {
    return make_schema("FACE",
                       {exact_slot("eye", "eye", 0.9), exact_slot("eye", "eye", 0.9),
                        exact_slot("nose", "nose", 0.7), exact_slot("mouth", "mouth", 0.7),
                        exact_slot("ear", "ear", 0.4)},
                       arousal);
}

inline SchemaStore store_of(std::initializer_list<Schema> schemata) {
    SchemaStore store;
    for (const auto& s : schemata) store.insert(s);
    return store;
}

// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() /
                ("ouroboros-" + tag + "-" + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

// Error code raised by `fn`, or nullopt when it returns normally.
template <class Fn>
std::optional<ErrorCode> error_code(Fn&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return std::nullopt;
}

inline std::filesystem::path data_file(const std::string& name) {
    return std::filesystem::path(OUROBOROS_DATA_DIR) / name;
}

}  // namespace ouroboros::testing
