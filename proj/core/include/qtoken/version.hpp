#pragma once

namespace qtoken {
inline constexpr const char* version = "1.0.0";
}
