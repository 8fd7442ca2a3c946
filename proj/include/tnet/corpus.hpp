#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tnet/utf8.hpp"

namespace tnet {

inline constexpr char32_t kJunkBase = 0x100;

/// Distinct filler symbols kJunkBase + first, ..., kJunkBase + first + n - 1.
SymbolString junk(int first, int n);

/// Strings "75648361", "75698136" and "75628136" joined either as three
/// copies of A+B+C ('A') or as AAA BBB CCC ('B'), 30 fresh junk symbols
/// between consecutive groups.
SymbolString corpus_fig1(char variant);

class CorpusError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// UTF-8 text, one symbol per character. Blank lines separate streams and
/// lines starting with '#' are skipped. Line breaks inside a stream carry
/// no symbol.
std::vector<SymbolString> parse_corpus(std::string_view text);
std::vector<SymbolString> load_corpus(const std::filesystem::path& path);

/// "fig1a", "fig1b" or a file path.
std::vector<SymbolString> resolve_corpus(const std::string& source);

}  // namespace tnet
