#pragma once

namespace latharm {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace latharm
