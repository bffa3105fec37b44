#pragma once

namespace egomerge {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace egomerge
