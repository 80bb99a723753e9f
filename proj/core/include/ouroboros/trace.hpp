#pragma once
// Episode trace: the ordered event log of one run, serialisable as JSONL with
// a fixed field order so identical runs give identical bytes.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ouroboros/matcher.hpp"
#include "ouroboros/memory.hpp"
#include "ouroboros/monitor.hpp"

namespace ouroboros {

enum class ResetCause { Impasse, Timeout, Flip };

std::string to_string(ResetCause c);

struct AdoptEvent {
    SchemaId schema;
    double activation = 0.0;
    int rivals = 0;
};

struct ReportEvent {
    ConsumptionReport report;
    int iteration = 0;
    MonitorState monitor;
};

struct RequestEvent {
    DimensionId dimension;
    std::size_t slot_index = 0;
    double weight = 0.0;
    std::optional<std::size_t> ground_index;  // unset when nothing was found
    std::optional<Position> position;
};

struct ResetEvent {
    ResetCause cause = ResetCause::Impasse;
    SchemaId schema;
    double tension = 0.0;  // tension at the moment of reset
    Tick expiry = 0;
    double released = 0.0;
};

struct ConcludeEvent {
    SchemaId schema;
    double fit = 0.0;
    double released = 0.0;
    int iteration = 0;
};

struct MemoryRecord {
    MemoryEvent event;
};

struct SleepRecord {
    SleepReport report;
};

using EventPayload = std::variant<AdoptEvent, ReportEvent, RequestEvent, ResetEvent,
                                  ConcludeEvent, MemoryRecord, SleepRecord>;

struct TraceEvent {
    Tick tick = 0;
    EventPayload payload;
};

std::string event_name(const EventPayload& payload);

enum class EpisodeOutcome { Concluded, Exhausted, MaxTicks, Aborted };

std::string to_string(EpisodeOutcome o);

struct EpisodeTrace {
    std::vector<TraceEvent> events;
    std::vector<MemoryEvent> memory_events;
    EpisodeOutcome outcome = EpisodeOutcome::MaxTicks;
    std::string error;  // set when the episode was aborted
    int iterations = 0;
    Tick ticks = 0;
    std::optional<Verdict> last_verdict;
    std::optional<SchemaId> concluded_schema;
    MonitorState final_monitor;

    void append(Tick tick, EventPayload payload) {
        events.push_back({tick, std::move(payload)});
    }

    template <class T>
    std::vector<const T*> events_of() const {
        std::vector<const T*> out;
        for (const auto& e : events)
            if (const auto* p = std::get_if<T>(&e.payload)) out.push_back(p);
        return out;
    }
};

std::string to_json_line(const TraceEvent& event);
void write_trace(const EpisodeTrace& trace, std::ostream& out);
std::string to_jsonl(const EpisodeTrace& trace);

// Structural check of a JSONL trace: known event names, fixed key order,
// nondecreasing ticks. Returns the event count; throws ParseError.
std::size_t validate_trace(std::istream& in);

}  // namespace ouroboros
