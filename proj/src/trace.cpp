#include "nis/trace.hpp"

namespace nis {

std::string Trace::to_jsonl() const {
    std::string out;
    for (const auto& e : events_) {
        Json line;
        line["at"] = e.at;
        line["entity"] = e.entity;
        line["event"] = e.event;
        for (auto it = e.fields.begin(); it != e.fields.end(); ++it) line[it.key()] = it.value();
        out += line.dump();
        out += '\n';
    }
    return out;
}

} // namespace nis
