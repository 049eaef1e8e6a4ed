#pragma once

namespace exchlab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace exchlab
