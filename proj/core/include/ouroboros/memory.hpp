#pragma once
// Candidate memories minted at impasse/success, their consolidation into the
// store, schema composition and the sleep cycle.

#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "ouroboros/params.hpp"
#include "ouroboros/schema_store.hpp"
#include "ouroboros/types.hpp"

namespace ouroboros {

enum class MemoryKind { Impasse, Success };

std::string to_string(MemoryKind k);

struct MemoryEvent {
    MemoryKind kind = MemoryKind::Impasse;
    std::vector<FeatureDatum> window;  // features active just before the event
    double importance = 0.0;           // tension at impasse, released tension at success
    Tick tick = 0;

    friend bool operator==(const MemoryEvent&, const MemoryEvent&) = default;
};

// proto.arousal_expectation carries the importance; proto.strength mirrors
// `strength` once written to disk.
struct CandidateSchema {
    Schema proto;
    double strength = 0.0;
    int repetitions = 1;
    Tick last_seen_tick = 0;

    double importance() const noexcept { return proto.arousal_expectation; }

    friend bool operator==(const CandidateSchema&, const CandidateSchema&) = default;
};

struct Ledger {
    std::vector<CandidateSchema> candidates;

    friend bool operator==(const Ledger&, const Ledger&) = default;
};

// Builds a proto-schema from the event window, or reinforces the candidate
// that already has the same slot multiset. Throws EmptyWindow.
CandidateSchema record_event(Ledger& ledger, const MemoryEvent& event,
                             const MemoryParams& params = {});

// Promotes candidates that reached full strength (gradual route) or carry
// importance >= tau_instant (one-shot route). Returns the new store ids.
std::vector<SchemaId> consolidate(Ledger& ledger, SchemaStore& store,
                                  const MemoryParams& params = {});

// A schema whose slots are SubSchema references to `parts`. Not inserted.
Schema compose_schema(const SchemaStore& store, SchemaId id, std::span<const SchemaId> parts,
                      std::span<const double> weights);

struct SleepReport {
    int pruned = 0;
    int decayed = 0;

    friend bool operator==(const SleepReport&, const SleepReport&) = default;
};

// Decays every candidate and drops weak, stale ones. Never touches the store.
SleepReport sleep_cycle(Ledger& ledger, const SchemaStore& store, Tick now,
                        const MemoryParams& params = {});

Ledger read_ledger(std::istream& in);
void write_ledger(const Ledger& ledger, std::ostream& out);
Ledger load_ledger(const std::filesystem::path& path);
void save_ledger(const Ledger& ledger, const std::filesystem::path& path);

}  // namespace ouroboros
