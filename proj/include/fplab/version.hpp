#pragma once

namespace fplab {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kSchemaVersion = "fplab/1";

}  // namespace fplab
