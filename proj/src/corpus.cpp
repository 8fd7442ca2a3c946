#include "tnet/corpus.hpp"

#include <fstream>
#include <sstream>

namespace tnet {

SymbolString junk(int first, int n) {
    SymbolString s;
    for (int i = 0; i < n; ++i) s += static_cast<char32_t>(kJunkBase + first + i);
    return s;
}

SymbolString corpus_fig1(char variant) {
    const SymbolString a = U"75648361", b = U"75698136", c = U"75628136";
    std::vector<SymbolString> groups;
    if (variant == 'A' || variant == 'a') {
        groups.assign(3, a + b + c);
    } else if (variant == 'B' || variant == 'b') {
        groups = {a + a + a, b + b + b, c + c + c};
    } else {
        throw CorpusError(std::string("unknown fig1 variant '") + variant + "'");
    }
    SymbolString out;
    int used = 0;
    for (std::size_t i = 0; i < groups.size(); ++i) {
        if (i) {
            out += junk(used, 30);
            used += 30;
        }
        out += groups[i];
    }
    return out;
}

std::vector<SymbolString> parse_corpus(std::string_view text) {
    std::vector<SymbolString> streams;
    SymbolString cur;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (!line.empty() && line.front() == '#') continue;
        if (line.empty()) {
            if (!cur.empty()) streams.push_back(std::move(cur));
            cur.clear();
            continue;
        }
        try {
            cur += from_utf8(line);
        } catch (const std::invalid_argument& e) {
            throw CorpusError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (!cur.empty()) streams.push_back(std::move(cur));
    return streams;
}

std::vector<SymbolString> load_corpus(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CorpusError("cannot open corpus file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_corpus(ss.str());
}

std::vector<SymbolString> resolve_corpus(const std::string& source) {
    if (source == "fig1a") return {corpus_fig1('A')};
    if (source == "fig1b") return {corpus_fig1('B')};
    return load_corpus(source);
}

}  // namespace tnet
