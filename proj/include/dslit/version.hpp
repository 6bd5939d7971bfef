#pragma once

#include <string_view>

namespace dslit {

inline constexpr std::string_view version = "0.1.0";

} // namespace dslit
