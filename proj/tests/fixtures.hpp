#pragma once

// The worked-example tree for "MAKE EVERYTHING AS SIMPLE AS POSSIBLE BUT NOT SIMPLER":
// bytes b1, b2 are stoppers and b3..b5 continuers, with a hand-picked (non-dense)
// codeword per word that reproduces the decode, locate and rank/select walkthroughs.

#include <wtbc/wavelet_tree.hpp>

#include <array>
#include <string>
#include <vector>

namespace wtbc::testing {

struct ExampleTree {
    static constexpr std::uint8_t b1 = 0, b2 = 1, b3 = 2, b4 = 3, b5 = 4;
    static constexpr std::uint32_t stoppers = 2;

    std::vector<std::string> words{"MAKE", "EVERYTHING", "AS", "SIMPLE", "POSSIBLE", "BUT", "NOT", "SIMPLER"};
    std::vector<Codeword> codes;
    std::vector<WordId> text{0, 1, 2, 3, 2, 4, 5, 6, 7};
    ByteCodeTree tree;

    ExampleTree() {
        const std::vector<std::vector<std::uint8_t>> bytes{
            {b4, b1},      // MAKE
            {b3, b1},      // EVERYTHING
            {b1},          // AS
            {b4, b2},      // SIMPLE
            {b5, b1},      // POSSIBLE
            {b3, b4, b2},  // BUT
            {b2},          // NOT
            {b4, b5, b1},  // SIMPLER
        };
        for (const auto& bs : bytes) {
            Codeword cw;
            for (auto b : bs) {
                cw.push_back(b);
            }
            codes.push_back(cw);
        }
        tree = ByteCodeTree::build(text, codes, stoppers);
    }

    [[nodiscard]] WordId id_of(const std::string& w) const {
        return static_cast<WordId>(std::find(words.begin(), words.end(), w) - words.begin());
    }
    [[nodiscard]] std::string word_of(const Codeword& cw) const {
        for (std::size_t i = 0; i < codes.size(); ++i) {
            if (codes[i] == cw) {
                return words[i];
            }
        }
        return {};
    }
    [[nodiscard]] const ByteSequenceRS& node(std::vector<std::uint8_t> path) const {
        return tree.nodes()[tree.find(path)].bytes;
    }
};

inline constexpr const char* kExampleSentence = "MAKE EVERYTHING AS SIMPLE AS POSSIBLE BUT NOT SIMPLER";

}  // namespace wtbc::testing
