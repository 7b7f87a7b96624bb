#pragma once

namespace fblpp {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace fblpp
