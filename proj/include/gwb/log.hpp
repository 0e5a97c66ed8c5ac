#pragma once

#include <cstdlib>
#include <iostream>
#include <mutex>
#include <string>

namespace gwb::log {

enum class Level { silent = 0, error = 1, warn = 2, info = 3, debug = 4 };

// Level is taken from the GWB_LOG environment variable (silent|error|warn|info|debug).
inline Level level() {
  static const Level lvl = [] {
    const char* env = std::getenv("GWB_LOG");
    if (env == nullptr) return Level::warn;
    const std::string v(env);
    if (v == "silent" || v == "0") return Level::silent;
    if (v == "error" || v == "1") return Level::error;
    if (v == "warn" || v == "2") return Level::warn;
    if (v == "info" || v == "3") return Level::info;
    if (v == "debug" || v == "4") return Level::debug;
    return Level::warn;
  }();
  return lvl;
}

inline void emit(Level lvl, const char* tag, const std::string& msg) {
  if (static_cast<int>(lvl) > static_cast<int>(level())) return;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  std::cerr << "[gwb:" << tag << "] " << msg << "\n";
}

inline void error(const std::string& msg) { emit(Level::error, "error", msg); }
inline void warn(const std::string& msg) { emit(Level::warn, "warn", msg); }
inline void info(const std::string& msg) { emit(Level::info, "info", msg); }
inline void debug(const std::string& msg) { emit(Level::debug, "debug", msg); }

}  // namespace gwb::log
