#pragma once

#include <gappred/surd.hpp>
#include <gappred/types.hpp>

#include <cstddef>
#include <string>
#include <vector>

namespace gappred {

/// One step of a mechanism execution. Traces power the hand-computed
/// execution oracles in the tests and the CLI's --trace output.
struct TraceEvent {
    enum class Kind { Propose, Accept, Reject, GreedyConsider, GreedySkip, GreedyAdd };

    Kind kind = Kind::Propose;
    Edge edge;
    std::vector<Surd> key;  // offer theta for Boost, full ranking key for Greedy
    std::size_t step = 0;
};

inline const char* trace_kind_name(TraceEvent::Kind k) {
    switch (k) {
        case TraceEvent::Kind::Propose: return "propose";
        case TraceEvent::Kind::Accept: return "accept";
        case TraceEvent::Kind::Reject: return "reject";
        case TraceEvent::Kind::GreedyConsider: return "consider";
        case TraceEvent::Kind::GreedySkip: return "skip";
        case TraceEvent::Kind::GreedyAdd: return "add";
    }
    return "?";
}

class Trace {
public:
    void emit(TraceEvent::Kind kind, Edge edge, std::vector<Surd> key) {
        events_.push_back(TraceEvent{kind, edge, std::move(key), events_.size()});
    }

    const std::vector<TraceEvent>& events() const { return events_; }

private:
    std::vector<TraceEvent> events_;
};

/// JSON-lines rendering, one event per line.
inline std::string to_json_lines(const Trace& trace) {
    std::string out;
    for (const TraceEvent& ev : trace.events()) {
        out += "{\"step\":" + std::to_string(ev.step) + ",\"kind\":\"" + trace_kind_name(ev.kind) +
               "\",\"agent\":" + std::to_string(ev.edge.agent) +
               ",\"resource\":" + std::to_string(ev.edge.resource) + ",\"key\":[";
        for (std::size_t k = 0; k < ev.key.size(); ++k) {
            if (k) out += ',';
            out += '"' + ev.key[k].to_string() + '"';
        }
        out += "]}\n";
    }
    return out;
}

}  // namespace gappred
