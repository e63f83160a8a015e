#pragma once

#include <string>

namespace nacnet {

/// Treatment response outcome. Pcr is the positive class throughout.
enum class Response { Rd = 0, Pcr = 1 };

std::string responseName(Response r);
Response responseFromName(const std::string& name);

} // namespace nacnet
