#include "gcs/error.hpp"

#include <iostream>
#include <mutex>

namespace gcs {

namespace {

std::mutex handler_mutex;
WarningHandler &handler_slot() {
    static WarningHandler handler;
    return handler;
}

} // namespace

void set_warning_handler(WarningHandler handler) {
    std::lock_guard lock(handler_mutex);
    handler_slot() = std::move(handler);
}

void warn(std::string_view message) {
    std::lock_guard lock(handler_mutex);
    if (auto &h = handler_slot())
        h(message);
    else
        std::cerr << "warning: " << message << '\n';
}

} // namespace gcs
