#include "ltem/log.hpp"

#include <cstdlib>
#include <cstring>

namespace ltem {

LogLevel log_level() {
  static const LogLevel level = [] {
    const char* env = std::getenv("LTEM_LOG_LEVEL");
    if (env == nullptr) return LogLevel::error;
    if (std::strcmp(env, "debug") == 0) return LogLevel::debug;
    if (std::strcmp(env, "info") == 0) return LogLevel::info;
    return LogLevel::error;
  }();
  return level;
}

}  // namespace ltem
