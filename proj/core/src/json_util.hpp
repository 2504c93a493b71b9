#pragma once

#include <string>

#include "debris/numeric.hpp"
#include "json.hpp"

namespace debris::detail {

using Json = nlohmann::json;

// Floats go through round_sig10 so that reports are byte-stable.
inline Json num(double v) { return Json(round_sig10(v)); }

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace debris::detail
