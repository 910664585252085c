#pragma once

namespace wrg {

inline constexpr const char* kCodeVersion = "0.3.1";

// Bumped whenever a data-file layout changes (snapshots, event logs,
// manifests, CSV tables, config grammar).
inline constexpr int kFormatVersion = 1;

}  // namespace wrg
