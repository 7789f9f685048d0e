#pragma once

#include <string>
#include <vector>

#include "proco/domain.hpp"

namespace proco {

/// Compact one-line JSON for a trace; lossless round trip.
std::string trace_to_json_line(const IterationTrace& trace);
IterationTrace trace_from_json_line(const std::string& line);

void write_traces_jsonl(const std::string& path,
                        const std::vector<IterationTrace>& traces);
std::vector<IterationTrace> read_traces_jsonl(const std::string& path);

}  // namespace proco
