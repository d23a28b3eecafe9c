#pragma once

namespace fbe {

inline constexpr const char* kVersion = "fburgers 1.0.0";

}  // namespace fbe
