#include "ouroboros/trace.hpp"

#include <algorithm>
#include <array>
#include <sstream>

#include "json_codec.hpp"
#include "ouroboros/error.hpp"

namespace ouroboros {

namespace {

using detail::ordered_json;

ordered_json monitor_json(const MonitorState& m) {
    ordered_json j;
    j["confidence"] = m.confidence;
    j["tension"] = m.tension;
    j["arousal"] = m.arousal;
    return j;
}

struct PayloadWriter {
    ordered_json operator()(const AdoptEvent& e) const {
        ordered_json j;
        j["schema"] = e.schema;
        j["activation"] = e.activation;
        j["rivals"] = e.rivals;
        return j;
    }
    ordered_json operator()(const ReportEvent& e) const {
        ordered_json j;
        j["schema"] = e.report.schema_id;
        j["iteration"] = e.iteration;
        j["fit"] = e.report.fit;
        j["verdict"] = to_string(e.report.verdict);
        ordered_json bindings = ordered_json::array();
        for (const auto& b : e.report.bindings) {
            ordered_json jb;
            jb["slot"] = b.slot_index;
            jb["feature"] = b.feature_index;
            jb["score"] = b.score;
            bindings.push_back(std::move(jb));
        }
        j["bindings"] = std::move(bindings);
        j["empty"] = e.report.empty_slots;
        j["unexplained"] = e.report.unexplained;
        j["monitor"] = monitor_json(e.monitor);
        return j;
    }
    ordered_json operator()(const RequestEvent& e) const {
        ordered_json j;
        j["dim"] = e.dimension.name();
        j["slot"] = e.slot_index;
        j["weight"] = e.weight;
        j["found"] = e.ground_index.has_value();
        if (e.ground_index) j["ground"] = *e.ground_index;
        if (e.position) j["pos"] = detail::position_to_json(*e.position);
        return j;
    }
    ordered_json operator()(const ResetEvent& e) const {
        ordered_json j;
        j["cause"] = to_string(e.cause);
        j["schema"] = e.schema;
        j["tension"] = e.tension;
        j["expiry"] = e.expiry;
        j["released"] = e.released;
        return j;
    }
    ordered_json operator()(const ConcludeEvent& e) const {
        ordered_json j;
        j["schema"] = e.schema;
        j["fit"] = e.fit;
        j["released"] = e.released;
        j["iteration"] = e.iteration;
        return j;
    }
    ordered_json operator()(const MemoryRecord& e) const {
        ordered_json j;
        j["kind"] = to_string(e.event.kind);
        j["importance"] = e.event.importance;
        ordered_json window = ordered_json::array();
        for (const auto& f : e.event.window) window.push_back(detail::feature_to_json(f));
        j["window"] = std::move(window);
        return j;
    }
    ordered_json operator()(const SleepRecord& e) const {
        ordered_json j;
        j["pruned"] = e.report.pruned;
        j["decayed"] = e.report.decayed;
        return j;
    }
};

constexpr std::array<std::string_view, 7> kEventNames = {"adopt", "report",  "request", "reset",
                                                         "conclude", "memory", "sleep"};

}  // namespace

std::string to_string(ResetCause c) {
    switch (c) {
        case ResetCause::Impasse: return "impasse";
        case ResetCause::Timeout: return "timeout";
        case ResetCause::Flip: return "flip";
    }
    return "impasse";
}

std::string to_string(EpisodeOutcome o) {
    switch (o) {
        case EpisodeOutcome::Concluded: return "concluded";
        case EpisodeOutcome::Exhausted: return "exhausted";
        case EpisodeOutcome::MaxTicks: return "max_ticks";
        case EpisodeOutcome::Aborted: return "aborted";
    }
    return "aborted";
}

std::string event_name(const EventPayload& payload) {
    return std::string(kEventNames.at(payload.index()));
}

std::string to_json_line(const TraceEvent& event) {
    ordered_json j;
    j["tick"] = event.tick;
    j["event"] = event_name(event.payload);
    j["data"] = std::visit(PayloadWriter{}, event.payload);
    return j.dump();
}

void write_trace(const EpisodeTrace& trace, std::ostream& out) {
    for (const auto& e : trace.events) out << to_json_line(e) << '\n';
}

std::string to_jsonl(const EpisodeTrace& trace) {
    std::ostringstream os;
    write_trace(trace, os);
    return os.str();
}

std::size_t validate_trace(std::istream& in) {
    std::size_t count = 0;
    Tick last_tick = 0;
    detail::for_each_line(in, [&](const std::string& text, std::size_t line) {
        ordered_json j;
        try {
            j = ordered_json::parse(text);
        } catch (const ordered_json::parse_error& e) {
            throw ParseError(line, std::string("malformed JSON: ") + e.what());
        }
        if (!j.is_object() || j.size() != 3) throw ParseError(line, "expected {tick, event, data}");
        auto it = j.begin();
        if (it.key() != "tick" || (++it).key() != "event" || (++it).key() != "data")
            throw ParseError(line, "fields must appear in the order tick, event, data");
        if (!j["tick"].is_number_integer()) throw ParseError(line, "tick must be an integer");
        const Tick tick = j["tick"].get<Tick>();
        if (tick < last_tick) throw ParseError(line, "ticks must be nondecreasing");
        last_tick = tick;
        if (!j["event"].is_string()) throw ParseError(line, "event must be a string");
        const auto name = j["event"].get<std::string>();
        if (std::find(kEventNames.begin(), kEventNames.end(), name) == kEventNames.end())
            throw ParseError(line, "unknown event '" + name + "'");
        if (!j["data"].is_object()) throw ParseError(line, "data must be an object");
        ++count;
    });
    return count;
}

}  // namespace ouroboros
