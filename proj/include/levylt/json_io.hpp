#pragma once

#include <string>

#include "json.hpp"

namespace levylt {

/// Pretty-printed JSON with every float at 17 significant digits; non-finite
/// floats become null.
std::string dump_json(const nlohmann::ordered_json& value);

}  // namespace levylt
