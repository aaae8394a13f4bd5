#pragma once

namespace hygame {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace hygame
