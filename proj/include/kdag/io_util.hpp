#ifndef KDAG_IO_UTIL_HPP
#define KDAG_IO_UTIL_HPP

#include <string>

namespace kdag {

/// Shortest decimal representation that round-trips to the same double
/// (std::to_chars). Locale-independent; used for all CSV/text output so
/// identical runs produce identical bytes.
std::string fmt_double(double value);

/// Writes content to path, throwing io_error on failure.
void write_file(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

/// Creates the directory (and parents) if missing; throws io_error on failure.
void ensure_directory(const std::string& path);

} // namespace kdag

#endif // KDAG_IO_UTIL_HPP
