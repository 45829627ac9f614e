#pragma once

namespace wickshift {

inline constexpr const char* version = "0.1.0";

}  // namespace wickshift
