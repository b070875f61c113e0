#pragma once

namespace qclust {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace qclust
