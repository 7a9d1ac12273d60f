#pragma once

namespace zeroone {

inline constexpr const char* kLibraryVersion = "0.1.0";

}  // namespace zeroone
