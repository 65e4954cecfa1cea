#pragma once

#include <string>
#include <vector>

#include "discflow/harness/config.hpp"

namespace discflow::harness {

// Shipped experiment presets; every protocol default (iterations, batch,
// chains, steps, thinning, burn-in) is the config default, so a bare preset
// reproduces the experimental protocol shape. Unknown names throw ConfigError.
Config preset_config(const std::string& name);

std::vector<std::string> preset_names();

}  // namespace discflow::harness
