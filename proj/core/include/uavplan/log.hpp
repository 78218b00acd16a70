#pragma once

#include <functional>
#include <string_view>

namespace uavplan {

using LogSink = std::function<void(std::string_view)>;

// Replaces the warning sink (default: stderr). Returns the previous one.
LogSink set_warning_sink(LogSink sink);
void log_warning(std::string_view msg);

}  // namespace uavplan
