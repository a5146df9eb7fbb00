#include <wtbc/corpus.hpp>

#include <algorithm>
#include <clocale>
#include <cwctype>
#include <fstream>
#include <iterator>
#include <locale.h>
#include <numeric>
#include <sstream>

namespace wtbc {

namespace {

locale_t utf8_ctype() {
    static const locale_t loc = [] {
        for (const char* name : {"C.UTF-8", "C.utf8", "en_US.UTF-8"}) {
            if (locale_t l = newlocale(LC_CTYPE_MASK, name, static_cast<locale_t>(nullptr))) {
                return l;
            }
        }
        return static_cast<locale_t>(nullptr);
    }();
    return loc;
}

struct Decoded {
    char32_t cp;
    std::size_t len;
};

// Decodes one UTF-8 sequence starting at text[pos]; rejects overlong forms,
// surrogates and code points above U+10FFFF.
Decoded decode_utf8(std::string_view text, std::size_t pos) {
    const auto byte = [&](std::size_t i) { return static_cast<unsigned char>(text[i]); };
    const unsigned char lead = byte(pos);
    if (lead < 0x80) {
        return {lead, 1};
    }
    std::size_t len = 0;
    char32_t cp = 0;
    char32_t min = 0;
    if ((lead & 0xE0) == 0xC0) {
        len = 2, cp = lead & 0x1F, min = 0x80;
    } else if ((lead & 0xF0) == 0xE0) {
        len = 3, cp = lead & 0x0F, min = 0x800;
    } else if ((lead & 0xF8) == 0xF0) {
        len = 4, cp = lead & 0x07, min = 0x10000;
    } else {
        throw IngestError("invalid UTF-8 lead byte at byte offset " + std::to_string(pos));
    }
    if (pos + len > text.size()) {
        throw IngestError("truncated UTF-8 sequence at byte offset " + std::to_string(pos));
    }
    for (std::size_t i = 1; i < len; ++i) {
        const unsigned char b = byte(pos + i);
        if ((b & 0xC0) != 0x80) {
            throw IngestError("invalid UTF-8 continuation at byte offset " + std::to_string(pos + i));
        }
        cp = (cp << 6) | (b & 0x3F);
    }
    if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
        throw IngestError("invalid UTF-8 code point at byte offset " + std::to_string(pos));
    }
    return {cp, len};
}

}  // namespace

bool is_word_char(char32_t cp) {
    if (cp < 0x80) {
        return (cp >= '0' && cp <= '9') || (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z');
    }
    if (locale_t loc = utf8_ctype()) {
        return iswalnum_l(static_cast<wint_t>(cp), loc) != 0;
    }
    return true;
}

std::vector<Token> tokenize(std::string_view text) {
    std::vector<Token> runs;
    std::size_t pos = 0;
    std::size_t run_start = 0;
    bool run_is_word = false;
    while (pos < text.size()) {
        const auto [cp, len] = decode_utf8(text, pos);
        const bool word = is_word_char(cp);
        if (pos == 0) {
            run_is_word = word;
        } else if (word != run_is_word) {
            runs.push_back({run_is_word ? TokenKind::word : TokenKind::separator,
                            std::string(text.substr(run_start, pos - run_start))});
            run_start = pos;
            run_is_word = word;
        }
        pos += len;
    }
    if (!text.empty()) {
        runs.push_back({run_is_word ? TokenKind::word : TokenKind::separator,
                        std::string(text.substr(run_start))});
    }

    std::vector<Token> tokens;
    tokens.reserve(runs.size());
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const bool implicit_space = runs[i].kind == TokenKind::separator && runs[i].text == " " &&
                                    i > 0 && i + 1 < runs.size();
        if (!implicit_space) {
            tokens.push_back(std::move(runs[i]));
        }
    }
    return tokens;
}

std::string detokenize(std::span<const Token> tokens, std::string_view doc_end_marker) {
    std::string out;
    bool prev_word = false;
    for (const Token& t : tokens) {
        switch (t.kind) {
            case TokenKind::word:
                if (prev_word) {
                    out.push_back(' ');
                }
                out += t.text;
                break;
            case TokenKind::separator:
                out += t.text;
                break;
            case TokenKind::doc_end:
                out += doc_end_marker;
                break;
        }
        prev_word = t.kind == TokenKind::word;
    }
    return out;
}

Vocabulary::Vocabulary(std::vector<VocabEntry> entries) : entries_(std::move(entries)) {
    if (entries_.empty() || entries_.front().kind != TokenKind::doc_end) {
        throw CorruptData("vocabulary must start with the doc_end sentinel");
    }
    lookup_.reserve(entries_.size());
    for (WordId id = 0; id < entries_.size(); ++id) {
        if (!lookup_.emplace(entries_[id].word, id).second) {
            throw CorruptData("duplicate vocabulary word: " + entries_[id].word);
        }
    }
}

const VocabEntry& Vocabulary::at(WordId id) const {
    if (id >= entries_.size()) {
        throw OutOfRange("word id " + std::to_string(id) + " past vocabulary size " +
                         std::to_string(entries_.size()));
    }
    return entries_[id];
}

std::optional<WordId> Vocabulary::find(std::string_view word) const {
    auto it = lookup_.find(std::string(word));
    if (it == lookup_.end()) {
        return std::nullopt;
    }
    return it->second;
}

WordId Vocabulary::id_of(std::string_view word) const {
    if (auto id = find(word)) {
        return *id;
    }
    throw UnknownWord(std::string(word));
}

Token Vocabulary::token(WordId id) const {
    const VocabEntry& e = at(id);
    return {e.kind, e.word};
}

std::vector<std::uint64_t> Vocabulary::frequencies() const {
    std::vector<std::uint64_t> f(entries_.size());
    std::transform(entries_.begin(), entries_.end(), f.begin(), [](const VocabEntry& e) { return e.freq; });
    return f;
}

std::vector<std::string> split_documents(std::string_view content, std::string_view delimiter) {
    std::vector<std::string> docs;
    std::size_t chunk_start = 0;
    std::size_t line_start = 0;
    const auto flush = [&](std::size_t end) {
        if (end > chunk_start) {
            docs.emplace_back(content.substr(chunk_start, end - chunk_start));
        }
    };
    while (line_start < content.size()) {
        std::size_t line_end = content.find('\n', line_start);
        if (line_end == std::string_view::npos) {
            line_end = content.size();
        }
        if (content.substr(line_start, line_end - line_start) == delimiter) {
            flush(line_start);
            chunk_start = std::min(line_end + 1, content.size());
        }
        line_start = line_end + 1;
    }
    flush(content.size());
    return docs;
}

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IngestError("cannot read " + path.string());
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

std::vector<std::string> read_documents(const IngestConfig& config) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (fs::is_directory(config.input, ec)) {
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(config.input)) {
            if (entry.is_regular_file()) {
                files.push_back(entry.path());
            }
        }
        std::sort(files.begin(), files.end());
        std::vector<std::string> docs;
        docs.reserve(files.size());
        for (const auto& f : files) {
            docs.push_back(read_file(f));
        }
        return docs;
    }
    if (!fs::is_regular_file(config.input, ec)) {
        throw IngestError("input not found: " + config.input.string());
    }
    if (config.delimiter.empty()) {
        throw IngestError("document delimiter must not be empty");
    }
    return split_documents(read_file(config.input), config.delimiter);
}

Collection build_collection(std::span<const std::string> documents, std::string_view sentinel) {
    if (sentinel.empty()) {
        throw IngestError("sentinel glyph must not be empty");
    }
    if (std::none_of(documents.begin(), documents.end(), [](const std::string& d) { return !d.empty(); })) {
        throw IngestError("collection has no non-empty document");
    }

    struct Draft {
        std::string word;
        TokenKind kind;
        std::uint64_t freq = 0;
        std::uint64_t df = 0;
        std::uint64_t last_doc = 0;
    };
    std::vector<Draft> drafts;
    drafts.push_back({std::string(sentinel), TokenKind::doc_end});
    std::unordered_map<std::string, std::uint32_t> ids;
    std::vector<std::uint32_t> stream;

    std::uint64_t original_bytes = 0;
    for (std::size_t d = 0; d < documents.size(); ++d) {
        const std::string& text = documents[d];
        if (auto at = text.find(sentinel); at != std::string::npos) {
            throw IngestError("document " + std::to_string(d + 1) + " contains the reserved sentinel '" +
                              std::string(sentinel) + "' at byte offset " + std::to_string(at));
        }
        std::vector<Token> tokens;
        try {
            tokens = tokenize(text);
        } catch (const IngestError& e) {
            throw IngestError("document " + std::to_string(d + 1) + ": " + e.what());
        }
        original_bytes += text.size();
        const std::uint64_t doc = d + 1;
        for (Token& t : tokens) {
            auto [it, inserted] = ids.try_emplace(t.text, static_cast<std::uint32_t>(drafts.size()));
            if (inserted) {
                drafts.push_back({std::move(t.text), t.kind});
            }
            Draft& entry = drafts[it->second];
            ++entry.freq;
            if (entry.last_doc != doc) {
                entry.last_doc = doc;
                ++entry.df;
            }
            stream.push_back(it->second);
        }
        stream.push_back(0);
    }
    drafts[0].freq = documents.size();
    drafts[0].df = documents.size();

    std::vector<std::uint32_t> order(drafts.size());
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin() + 1, order.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (drafts[a].freq != drafts[b].freq) {
            return drafts[a].freq > drafts[b].freq;
        }
        return drafts[a].word < drafts[b].word;
    });
    std::vector<WordId> rank_of(drafts.size());
    std::vector<VocabEntry> entries;
    entries.reserve(drafts.size());
    for (std::uint32_t r = 0; r < order.size(); ++r) {
        rank_of[order[r]] = r;
        Draft& src = drafts[order[r]];
        entries.push_back({std::move(src.word), src.kind, src.freq, src.df});
    }

    Collection out;
    out.tokens.resize(stream.size());
    std::transform(stream.begin(), stream.end(), out.tokens.begin(), [&](std::uint32_t t) { return rank_of[t]; });
    out.vocab = Vocabulary(std::move(entries));
    out.stats.num_docs = documents.size();
    out.stats.num_tokens = out.tokens.size();
    out.stats.vocab_size = out.vocab.size();
    out.stats.original_bytes = original_bytes;
    return out;
}

Collection build_collection(const IngestConfig& config) {
    const auto docs = read_documents(config);
    if (docs.empty()) {
        throw IngestError("no documents found in " + config.input.string());
    }
    return build_collection(docs, config.sentinel);
}

}  // namespace wtbc
