#ifndef TNSLICE_PRESETS_HPP
#define TNSLICE_PRESETS_HPP

#include "tnslice/scenario.hpp"

#include <string>
#include <vector>

namespace tnslice {

std::vector<std::string> PresetNames ();

// Throws Error(ValidationError) for unknown names.
Scenario MakePreset (const std::string &name);

} // namespace tnslice

#endif
