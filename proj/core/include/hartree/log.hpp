#pragma once

#include <functional>
#include <string_view>

namespace hartree {

using WarningHandler = std::function<void(std::string_view)>;

/// Installs a handler for numerical warnings; returns the previous one.
/// The default handler writes to stderr.
WarningHandler set_warning_handler(WarningHandler handler);

void warn(std::string_view message);

}  // namespace hartree
