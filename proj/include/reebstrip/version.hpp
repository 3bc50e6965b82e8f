#pragma once

namespace reebstrip {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace reebstrip
