#pragma once

namespace hydropiml {

inline constexpr const char* kArtifactVersion = "0.1.0";

}  // namespace hydropiml
