#pragma once

#include <cmath>
#include <numbers>
#include <string_view>

namespace sqt {

/// Logarithm base shared by every entropy-valued quantity. Bits by default.
enum class LogBase { two, e };

inline double log_scale(LogBase base) noexcept {
    return base == LogBase::two ? std::numbers::ln2 : 1.0;
}

/// Converts a natural-log quantity into the requested base.
inline double from_nats(double nats, LogBase base) noexcept {
    return nats / log_scale(base);
}

inline std::string_view to_string(LogBase base) noexcept {
    return base == LogBase::two ? "2" : "e";
}

}  // namespace sqt
