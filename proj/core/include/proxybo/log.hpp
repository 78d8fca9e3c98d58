#pragma once

#include <memory>

namespace spdlog {
class logger;
}

namespace proxybo {

// Library-wide logger writing to stderr. Verbosity comes from the PROXYBO_LOG
// environment variable (trace, debug, info, warn, error, off; default warn).
std::shared_ptr<spdlog::logger> logger();

}  // namespace proxybo
