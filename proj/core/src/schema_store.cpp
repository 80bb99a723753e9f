#include "ouroboros/schema_store.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json_codec.hpp"
#include "ouroboros/error.hpp"
#include "ouroboros/file_util.hpp"
#include "ouroboros/matcher.hpp"

namespace ouroboros {

const SchemaId& SchemaStore::insert(Schema schema) {
    validate_schema(schema);
    if (schemata_.count(schema.id))
        throw Error(ErrorCode::DuplicateId, "schema '" + schema.id + "' already present");
    auto id = schema.id;
    auto [it, inserted] = schemata_.emplace(std::move(id), std::move(schema));
    return it->first;
}

const Schema* SchemaStore::find(const SchemaId& id) const {
    auto it = schemata_.find(id);
    return it == schemata_.end() ? nullptr : &it->second;
}

const Schema& SchemaStore::at(const SchemaId& id) const {
    if (const Schema* s = find(id)) return *s;
    throw Error(ErrorCode::UnknownSchema, "no schema '" + id + "'");
}

namespace {

// Sort key quantised so that sums of the same weights taken in a different
// order compare equal and fall through to the id tie-break.
double rank_key(double activation) { return std::round(activation * 1e12); }

}  // namespace

std::vector<ActivationEntry> candidate_activations(const SchemaStore& store,
                                                   std::span<const FeatureDatum> features,
                                                   const std::set<SchemaId>& bypass,
                                                   double arousal,
                                                   const ActivationParams& activation,
                                                   const MatcherParams& matcher) {
    if (!(arousal >= 0.0 && arousal <= 1.0))
        throw Error(ErrorCode::InvalidArgument, "arousal must lie in [0,1]");
    std::vector<ActivationEntry> ranked;
    ranked.reserve(store.size());
    for (const auto& [id, schema] : store.schemata()) {
        if (bypass.count(id)) continue;
        double raw = 0.0;
        if (!features.empty())
            raw = consumption_analysis(schema, features, 0, store, matcher).fit;
        const double congruence =
            1.0 - activation.gamma * std::abs(schema.arousal_expectation - arousal);
        ranked.push_back({id, std::clamp(raw * congruence, 0.0, raw), raw});
    }
    // Store iteration is already by id, so a stable sort keeps id order on ties.
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        return rank_key(a.activation) > rank_key(b.activation);
    });
    return ranked;
}

std::optional<SchemaId> select_winner(std::span<const ActivationEntry> ranked, double floor) {
    for (const auto& e : ranked)
        if (e.activation >= floor) return e.schema_id;
    return std::nullopt;
}

SchemaStore read_store(std::istream& in) {
    SchemaStore store;
    detail::for_each_line(in, [&](const std::string& text, std::size_t line) {
        Schema schema = detail::schema_from_json(detail::parse_line(text, line), line);
        try {
            store.insert(std::move(schema));
        } catch (const Error& e) {
            throw ParseError(line, e.what());
        }
    });
    return store;
}

void write_store(const SchemaStore& store, std::ostream& out) {
    for (const auto& [id, schema] : store.schemata()) out << detail::schema_to_json(schema).dump() << '\n';
}

SchemaStore load_store(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open store '" + path.string() + "'");
    return read_store(in);
}

void save_store(const SchemaStore& store, const std::filesystem::path& path) {
    std::ostringstream os;
    write_store(store, os);
    write_file_atomic(path, os.str());
}

}  // namespace ouroboros
