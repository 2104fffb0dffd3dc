#pragma once

namespace vtf {
inline constexpr const char* kVersion = "0.1.0";
}
