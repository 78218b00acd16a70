#include "uavplan/log.hpp"

#include <iostream>
#include <mutex>

namespace uavplan {

namespace {
std::mutex mu;
LogSink sink = [](std::string_view m) { std::cerr << "warning: " << m << '\n'; };
}  // namespace

LogSink set_warning_sink(LogSink s) {
    std::lock_guard lock(mu);
    std::swap(sink, s);
    return s;
}

void log_warning(std::string_view msg) {
    std::lock_guard lock(mu);
    if (sink) sink(msg);
}

}  // namespace uavplan
