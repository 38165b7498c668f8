#pragma once

#include <filesystem>
#include <string>

#include "qnn/trace.hpp"

namespace qnn {

/// Standalone 800x600 SVG with a single (time, value) polyline for one
/// tracked metric, axis lines with min/max tick labels and the metric name
/// as title.
std::string format_svg(const TraceRecord& trace, const std::string& metric);

void emit_svg(const TraceRecord& trace, const std::string& metric,
              const std::filesystem::path& path);

}  // namespace qnn
