#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tnet {

using SymbolString = std::u32string;

inline std::string to_utf8(char32_t c) {
    std::string out;
    if (c < 0x80) {
        out += static_cast<char>(c);
    } else if (c < 0x800) {
        out += static_cast<char>(0xC0 | (c >> 6));
        out += static_cast<char>(0x80 | (c & 0x3F));
    } else if (c < 0x10000) {
        out += static_cast<char>(0xE0 | (c >> 12));
        out += static_cast<char>(0x80 | ((c >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (c & 0x3F));
    } else {
        out += static_cast<char>(0xF0 | (c >> 18));
        out += static_cast<char>(0x80 | ((c >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((c >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (c & 0x3F));
    }
    return out;
}

inline std::string to_utf8(const SymbolString& s) {
    std::string out;
    for (char32_t c : s) out += to_utf8(c);
    return out;
}

/// Strict decoder; throws std::invalid_argument on malformed input.
inline SymbolString from_utf8(std::string_view s) {
    SymbolString out;
    std::size_t i = 0;
    while (i < s.size()) {
        const auto b0 = static_cast<unsigned char>(s[i]);
        int extra = 0;
        char32_t c = 0;
        if (b0 < 0x80) {
            c = b0;
        } else if ((b0 & 0xE0) == 0xC0) {
            c = b0 & 0x1F;
            extra = 1;
        } else if ((b0 & 0xF0) == 0xE0) {
            c = b0 & 0x0F;
            extra = 2;
        } else if ((b0 & 0xF8) == 0xF0) {
            c = b0 & 0x07;
            extra = 3;
        } else {
            throw std::invalid_argument("malformed UTF-8 at byte " + std::to_string(i));
        }
        for (int k = 1; k <= extra; ++k) {
            if (i + k >= s.size()) throw std::invalid_argument("truncated UTF-8 at byte " + std::to_string(i));
            const auto b = static_cast<unsigned char>(s[i + k]);
            if ((b & 0xC0) != 0x80) throw std::invalid_argument("malformed UTF-8 at byte " + std::to_string(i + k));
            c = (c << 6) | (b & 0x3F);
        }
        out += c;
        i += static_cast<std::size_t>(extra) + 1;
    }
    return out;
}

}  // namespace tnet
