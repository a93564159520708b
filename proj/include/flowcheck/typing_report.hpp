#pragma once

#include <json.hpp>

#include "flowcheck/typing.hpp"

namespace flowcheck::typing {

/// {"variables": {...}, "channels": {...}, "points": {"a@p": [...]}}; the full
/// form also carries "pc" and renders non-variable dependencies ("pc", "#a", "a@p").
nlohmann::json typing_report(const DepEnv& g, bool restricted);

/// Lossless encoding: the universe plus every row.
nlohmann::json typing_to_json(const DepEnv& g);
DepEnv typing_from_json(const nlohmann::json& j);

}  // namespace flowcheck::typing
