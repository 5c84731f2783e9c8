#pragma once

#include <cstdio>

namespace ltem {

enum class LogLevel { error = 0, info = 1, debug = 2 };

// Level comes from LTEM_LOG_LEVEL (error|info|debug), read once; defaults
// to error. Messages go to stderr.
LogLevel log_level();

}  // namespace ltem

#define LTEM_LOG(level, tag, ...)                                  \
  do {                                                             \
    if (::ltem::log_level() >= (level)) {                          \
      std::fprintf(stderr, "[%s] ", tag);                          \
      std::fprintf(stderr, __VA_ARGS__);                           \
      std::fprintf(stderr, "\n");                                  \
    }                                                              \
  } while (0)

#define LTEM_ERROR(...) LTEM_LOG(::ltem::LogLevel::error, "error", __VA_ARGS__)
#define LTEM_INFO(...) LTEM_LOG(::ltem::LogLevel::info, "info", __VA_ARGS__)
#define LTEM_DEBUG(...) LTEM_LOG(::ltem::LogLevel::debug, "debug", __VA_ARGS__)
