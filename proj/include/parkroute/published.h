#pragma once

#include <filesystem>
#include <optional>

#include "parkroute/instance.h"

namespace parkroute {

// Reader for instance directories laid out as plain matrices on disk:
//
//   <dir>/drive.csv   (n+1)x(n+1) driving minutes, depot first
//   <dir>/walk.csv    (n+1)x(n+1) or n x n walking minutes
//   <dir>/meta.json   optional {"p": minutes | [..], "q": int, "f": minutes}
//
// Cells may be separated by commas, semicolons or whitespace. Lines starting
// with '#' are skipped. Reads local files only.
struct PublishedOptions {
  std::optional<double> park_time;  // overrides meta.json
  std::optional<int> capacity;
  std::optional<double> load;
};

bool published_loader_enabled();

Instance load_published_instance(const std::filesystem::path& dir,
                                 const PublishedOptions& options = {});

}  // namespace parkroute
