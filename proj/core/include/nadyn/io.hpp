#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

namespace nadyn::io {

// Shortest round-trip text for a double at 17 significant digits, '.' as the
// decimal separator regardless of locale.
std::string format_double(double value);

// "# key: value" comment lines placed at the top of every CSV artifact.
struct Provenance {
    std::string tool_version;
    std::string config_hash;
};
void write_comment_header(std::ostream& out, const Provenance& provenance);

// 64-bit FNV-1a of the text, as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view text);

std::string_view tool_version();

} // namespace nadyn::io
