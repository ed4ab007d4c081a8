#include "hartree/log.hpp"

#include <iostream>
#include <mutex>
#include <string>

namespace hartree {
namespace {

std::mutex handler_mutex;

WarningHandler& handler() {
    static WarningHandler h = [](std::string_view message) { std::cerr << "[hartree] warning: " << message << '\n'; };
    return h;
}

}  // namespace

WarningHandler set_warning_handler(WarningHandler next) {
    std::lock_guard lock(handler_mutex);
    auto previous = std::move(handler());
    handler() = std::move(next);
    return previous;
}

void warn(std::string_view message) {
    WarningHandler h;
    {
        std::lock_guard lock(handler_mutex);
        h = handler();
    }
    if (h) h(message);
}

}  // namespace hartree
