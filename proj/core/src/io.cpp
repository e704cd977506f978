#include "nadyn/io.hpp"

#include <array>
#include <charconv>
#include <cstdint>
#include <ostream>

#ifndef NADYN_VERSION
#define NADYN_VERSION "0.0.0"
#endif

namespace nadyn::io {

std::string format_double(double value) {
    std::array<char, 64> buffer{};
    const auto result = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value,
                                      std::chars_format::general, 17);
    return std::string(buffer.data(), result.ptr);
}

void write_comment_header(std::ostream& out, const Provenance& provenance) {
    out << "# nadyn " << provenance.tool_version << "\n";
    out << "# config_hash " << provenance.config_hash << "\n";
}

std::string fnv1a_hex(std::string_view text) {
    std::uint64_t hash = 14695981039346656037ull;
    for (const char c : text) {
        hash ^= static_cast<unsigned char>(c);
        hash *= 1099511628211ull;
    }
    static constexpr char digits[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[hash & 0xf];
        hash >>= 4;
    }
    return out;
}

std::string_view tool_version() { return NADYN_VERSION; }

} // namespace nadyn::io
