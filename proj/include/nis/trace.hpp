#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "nis/address.hpp"

namespace nis {

// insertion-ordered so trace lines read (and diff) predictably
using Json = nlohmann::ordered_json;

struct TraceEvent {
    Tick at = 0;
    std::string entity;
    std::string event;
    Json fields; // event-specific keys, addresses in canonical text form
};

class Trace {
public:
    void log(Tick at, std::string entity, std::string event, Json fields = Json::object()) {
        events_.push_back({at, std::move(entity), std::move(event), std::move(fields)});
    }

    const std::vector<TraceEvent>& events() const { return events_; }

    // one JSON object per line: {"at":..,"entity":..,"event":..,...}
    std::string to_jsonl() const;

private:
    std::vector<TraceEvent> events_;
};

} // namespace nis
