#pragma once

// Corpus generators and linear-scan oracles shared by the test suites.

#include <wtbc/corpus.hpp>

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace wtbc::testing {

/// Samples ranks 0..n-1 with probability proportional to 1 / (rank + 1)^exponent.
class Zipf {
public:
    Zipf(std::size_t n, double exponent) : cdf_(n) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            total += 1.0 / std::pow(static_cast<double>(i + 1), exponent);
            cdf_[i] = total;
        }
        for (double& c : cdf_) {
            c /= total;
        }
    }

    template <class Rng>
    std::size_t operator()(Rng& rng) const {
        const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        const auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
        return it == cdf_.end() ? cdf_.size() - 1 : static_cast<std::size_t>(it - cdf_.begin());
    }

private:
    std::vector<double> cdf_;
};

inline std::string vocab_word(std::size_t i) { return "w" + std::to_string(i); }

/// Documents of Zipf-distributed words, with occasional punctuation so separator
/// tokens appear too.
inline std::vector<std::string> zipf_corpus(std::uint64_t seed, std::size_t num_docs, std::size_t vocab_size,
                                            std::size_t max_doc_words = 60) {
    std::mt19937_64 rng(seed);
    const Zipf zipf(vocab_size, 1.0);
    std::uniform_int_distribution<std::size_t> len(1, max_doc_words);
    std::uniform_int_distribution<int> punct(0, 19);
    static const char* const kSeparators[] = {", ", ". ", "; ", " - ", "\n", "  "};
    std::vector<std::string> docs;
    docs.reserve(num_docs);
    for (std::size_t d = 0; d < num_docs; ++d) {
        std::string text;
        const std::size_t n = len(rng);
        for (std::size_t i = 0; i < n; ++i) {
            if (i > 0) {
                const int p = punct(rng);
                text += p < 6 ? kSeparators[p] : " ";
            }
            text += vocab_word(zipf(rng));
        }
        if (punct(rng) == 0) {
            text += ".\n";
        }
        docs.push_back(std::move(text));
    }
    return docs;
}

/// Random text mixing ASCII, multi-byte UTF-8, spaces and punctuation.
inline std::string random_text(std::mt19937_64& rng, std::size_t pieces) {
    static const char* const kPieces[] = {"a",  "Zz", "42", "é",  "中文", "😀", " ",  " ",   "  ",
                                          ",",  ".",  "\n", "\t", "-",   "ß",  "x1", "Ünï", "'"};
    std::uniform_int_distribution<std::size_t> pick(0, std::size(kPieces) - 1);
    std::string s;
    for (std::size_t i = 0; i < pieces; ++i) {
        s += kPieces[pick(rng)];
    }
    return s;
}

/// Per-document tf of every word id, from the plain token stream.
inline std::vector<std::vector<std::uint64_t>> scan_tf(const Collection& c) {
    std::vector<std::vector<std::uint64_t>> tf(c.stats.num_docs, std::vector<std::uint64_t>(c.vocab.size(), 0));
    std::size_t doc = 0;
    for (WordId t : c.tokens) {
        if (t == kDocEnd) {
            ++doc;
        } else {
            ++tf[doc][t];
        }
    }
    return tf;
}

}  // namespace wtbc::testing
