#include "ouroboros/memory.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json_codec.hpp"
#include "ouroboros/error.hpp"
#include "ouroboros/file_util.hpp"

namespace ouroboros {

namespace {

constexpr double kStrengthSlack = 1e-9;

Expectation expectation_for(const FeatureValue& value, double tolerance) {
    if (const auto* s = std::get_if<std::string>(&value)) return ExactSymbol{*s};
    const double v = std::get<double>(value);
    const double spread = std::abs(v) * tolerance;
    return NumericRange{v - spread, v + spread};
}

// Canonical, order-independent description of a slot multiset.
std::vector<std::string> slot_keys(const Schema& schema) {
    std::vector<std::string> keys;
    for (const auto& slot : schema.slots)
        keys.push_back(slot.dimension.name() + '\x1f' +
                       detail::expectation_to_json(slot.expectation).dump());
    std::sort(keys.begin(), keys.end());
    return keys;
}

// FNV-1a over the canonical slot keys; gives learned schemata stable ids.
std::string fingerprint(const std::vector<std::string>& keys) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const auto& k : keys) {
        for (unsigned char c : k) {
            h ^= c;
            h *= 0x100000001b3ULL;
        }
        h ^= 0x1e;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

}  // namespace

std::string to_string(MemoryKind k) { return k == MemoryKind::Impasse ? "impasse" : "success"; }

CandidateSchema record_event(Ledger& ledger, const MemoryEvent& event, const MemoryParams& params) {
    if (event.window.empty()) throw Error(ErrorCode::EmptyWindow, "memory event has no features");
    if (!(event.importance >= 0.0 && event.importance <= 1.0))
        throw Error(ErrorCode::InvalidArgument, "importance must lie in [0,1]");

    Tick earliest = event.window.front().tick;
    for (const auto& f : event.window) earliest = std::min(earliest, f.tick);

    Schema proto;
    proto.provenance =
        event.kind == MemoryKind::Impasse ? Provenance::LearnedImpasse : Provenance::LearnedSuccess;
    proto.arousal_expectation = event.importance;
    proto.strength = event.importance;
    proto.created_tick = event.tick;
    for (std::size_t i = 0; i < event.window.size(); ++i) {
        const FeatureDatum& f = event.window[i];
        const auto first = event.window.begin();
        const bool seen = std::any_of(first, first + static_cast<std::ptrdiff_t>(i),
                                      [&](const FeatureDatum& g) {
                                          return g.dimension == f.dimension && g.value == f.value;
                                      });
        if (seen) continue;
        Slot slot;
        slot.dimension = f.dimension;
        slot.expectation = expectation_for(f.value, params.numeric_tolerance);
        slot.weight = std::clamp(f.salience, params.min_slot_weight, 1.0);
        slot.temporal_offset = f.tick - earliest;
        proto.slots.push_back(std::move(slot));
    }
    const auto keys = slot_keys(proto);
    proto.id = std::string(event.kind == MemoryKind::Impasse ? "impasse_" : "success_") +
               fingerprint(keys);

    for (auto& c : ledger.candidates) {
        if (slot_keys(c.proto) != keys) continue;
        ++c.repetitions;
        c.strength = std::min(1.0, c.strength + params.repetition_increment);
        c.proto.strength = c.strength;
        c.proto.arousal_expectation = std::max(c.proto.arousal_expectation, event.importance);
        c.last_seen_tick = event.tick;
        return c;
    }

    CandidateSchema candidate{proto, event.importance, 1, event.tick};
    ledger.candidates.push_back(candidate);
    return candidate;
}

std::vector<SchemaId> consolidate(Ledger& ledger, SchemaStore& store, const MemoryParams& params) {
    std::vector<SchemaId> promoted;
    std::vector<CandidateSchema> remaining;
    for (auto& c : ledger.candidates) {
        const bool gradual = c.strength >= 1.0 - kStrengthSlack;
        const bool one_shot = c.importance() >= params.tau_instant - kStrengthSlack;
        if (!gradual && !one_shot) {
            remaining.push_back(std::move(c));
            continue;
        }
        Schema schema = c.proto;
        schema.strength = std::clamp(c.strength, 0.0, 1.0);
        schema.created_tick = c.last_seen_tick;
        if (store.contains(schema.id)) schema.id += "_1";
        store.insert(schema);  // a second collision surfaces as DuplicateId
        promoted.push_back(schema.id);
    }
    ledger.candidates = std::move(remaining);
    return promoted;
}

Schema compose_schema(const SchemaStore& store, SchemaId id, std::span<const SchemaId> parts,
                      std::span<const double> weights) {
    if (parts.empty()) throw Error(ErrorCode::InvalidArgument, "composition needs at least one part");
    if (parts.size() != weights.size())
        throw Error(ErrorCode::InvalidArgument, "one weight per part is required");
    Schema composite;
    composite.id = std::move(id);
    composite.provenance = Provenance::Innate;
    double arousal = 0.0;
    double strength = 1.0;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        const Schema& part = store.at(parts[i]);
        if (!(weights[i] > 0.0 && weights[i] <= 1.0))
            throw Error(ErrorCode::InvalidArgument, "part weights must lie in (0,1]");
        composite.slots.push_back({DimensionId(part.id), SubSchema{part.id}, weights[i], std::nullopt});
        arousal += part.arousal_expectation;
        strength = std::min(strength, part.strength);
    }
    composite.arousal_expectation = arousal / static_cast<double>(parts.size());
    composite.strength = strength;
    validate_schema(composite);
    return composite;
}

SleepReport sleep_cycle(Ledger& ledger, const SchemaStore& /*store*/, Tick now,
                        const MemoryParams& params) {
    SleepReport report;
    std::vector<CandidateSchema> kept;
    for (auto& c : ledger.candidates) {
        c.strength *= params.sleep_decay;
        c.proto.strength = c.strength;
        ++report.decayed;
        if (c.strength < params.prune_strength && now - c.last_seen_tick > params.prune_age) {
            ++report.pruned;
            continue;
        }
        kept.push_back(std::move(c));
    }
    ledger.candidates = std::move(kept);
    return report;
}

Ledger read_ledger(std::istream& in) {
    Ledger ledger;
    detail::for_each_line(in, [&](const std::string& text, std::size_t line) {
        const auto j = detail::parse_line(text, line);
        CandidateSchema c;
        c.proto = detail::schema_from_json(j, line, {"candidate", "repetitions", "last_seen"});
        for (const char* key : {"candidate", "repetitions", "last_seen"})
            if (!j.contains(key)) throw ParseError(line, std::string("missing field '") + key + "'");
        if (!j.at("candidate").is_boolean() || !j.at("candidate").get<bool>())
            throw ParseError(line, "'candidate' must be true");
        c.strength = c.proto.strength;
        c.repetitions = static_cast<int>(detail::get_integer(j, "repetitions", line));
        if (c.repetitions < 1) throw ParseError(line, "repetitions must be >= 1");
        c.last_seen_tick = detail::get_integer(j, "last_seen", line);
        try {
            validate_schema(c.proto);
        } catch (const Error& e) {
            throw ParseError(line, e.what());
        }
        ledger.candidates.push_back(std::move(c));
    });
    return ledger;
}

void write_ledger(const Ledger& ledger, std::ostream& out) {
    for (const auto& c : ledger.candidates) {
        Schema proto = c.proto;
        proto.strength = c.strength;
        auto j = detail::schema_to_json(proto);
        j["candidate"] = true;
        j["repetitions"] = c.repetitions;
        j["last_seen"] = c.last_seen_tick;
        out << j.dump() << '\n';
    }
}

Ledger load_ledger(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open ledger '" + path.string() + "'");
    return read_ledger(in);
}

void save_ledger(const Ledger& ledger, const std::filesystem::path& path) {
    std::ostringstream os;
    write_ledger(ledger, os);
    write_file_atomic(path, os.str());
}

}  // namespace ouroboros
