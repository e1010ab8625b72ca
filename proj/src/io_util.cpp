#include "kdag/io_util.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <system_error>

#include "kdag/errors.hpp"

namespace kdag {

std::string fmt_double(double value) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc{})
        throw internal_error("fmt_double: to_chars failed");
    return {buf, ptr};
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw io_error("cannot open for writing: " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out)
        throw io_error("write failed: " + path);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw io_error("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void ensure_directory(const std::string& path) {
    if (path.empty())
        return;
    std::error_code ec;
    std::filesystem::create_directories(path, ec);
    if (ec)
        throw io_error("cannot create directory " + path + ": " + ec.message());
}

} // namespace kdag
