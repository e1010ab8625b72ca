#ifndef KDAG_VERSION_HPP
#define KDAG_VERSION_HPP

namespace kdag {
inline constexpr const char* TOOL_VERSION = "1.0.0";
}

#endif // KDAG_VERSION_HPP
