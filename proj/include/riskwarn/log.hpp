#ifndef RISKWARN_LOG_HPP
#define RISKWARN_LOG_HPP

#include <cstdlib>
#include <iostream>
#include <string>

namespace riskwarn::log {

enum class Level { Error = 0, Info = 1, Debug = 2 };

/// Level comes from RISKWARN_LOG ("error", "info", "debug"); defaults to
/// info. Messages go to stderr so stdout stays machine-readable.
inline Level level() {
    static const Level lvl = [] {
        const char* env = std::getenv("RISKWARN_LOG");
        if (!env) return Level::Info;
        const std::string v(env);
        if (v == "error") return Level::Error;
        if (v == "debug") return Level::Debug;
        return Level::Info;
    }();
    return lvl;
}

inline void error(const std::string& msg) {
    std::cerr << "[error] " << msg << '\n';
}

inline void info(const std::string& msg) {
    if (level() >= Level::Info) std::cerr << "[info] " << msg << '\n';
}

inline void debug(const std::string& msg) {
    if (level() >= Level::Debug) std::cerr << "[debug] " << msg << '\n';
}

}  // namespace riskwarn::log

#endif  // RISKWARN_LOG_HPP
