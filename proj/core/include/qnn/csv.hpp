#pragma once

#include <filesystem>
#include <string>

#include "qnn/trace.hpp"

namespace qnn {

/// CSV text for a trace: header `step,time,<label1>,...`, one row per step,
/// values with 12 significant digits, final line newline-terminated.
std::string format_csv(const TraceRecord& trace);

void emit_csv(const TraceRecord& trace, const std::filesystem::path& path);

/// Parses CSV produced by format_csv back into a trace (round-trip checks
/// and downstream tooling).
TraceRecord parse_csv(const std::string& text);

}  // namespace qnn
