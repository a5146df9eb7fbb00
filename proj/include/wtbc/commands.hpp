#pragma once

#include <wtbc/index_io.hpp>
#include <wtbc/retrieval.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace wtbc::cli {

struct BuildArgs {
    std::filesystem::path input;
    std::filesystem::path output;
    bool drb = false;
    double epsilon = 1e-6;
    std::uint32_t block_size = ByteSequenceRS::kDefaultBlockSize;
    std::string delimiter = "%%DOC%%";
    std::string sentinel = "$";
    bool store_counters = false;
};

enum class Algo { dr, drb, oracle };

struct QueryArgs {
    std::filesystem::path index;
    std::string query;
    QueryMode mode = QueryMode::disjunctive;
    Algo algo = Algo::dr;
    std::size_t k = 10;
    /// Original corpus, required by the oracle.
    std::optional<std::filesystem::path> corpus;
    std::string delimiter = "%%DOC%%";
};

struct ExtractArgs {
    std::filesystem::path index;
    std::optional<DocId> doc;
    std::optional<std::pair<Position, Position>> pos;
    std::optional<std::pair<std::string, std::uint64_t>> hit;
    std::uint64_t window = 10;
};

struct BenchArgs {
    std::filesystem::path index;
    std::filesystem::path queries;
    QueryMode mode = QueryMode::disjunctive;
    Algo algo = Algo::dr;
    std::size_t k = 10;
    unsigned repeat = 1;
    std::optional<std::filesystem::path> corpus;
    std::string delimiter = "%%DOC%%";
};

/// Each command writes its report to `out` and throws wtbc::Error on failure.
void build(const BuildArgs& args, std::ostream& out);
void query(const QueryArgs& args, std::ostream& out);
void extract(const ExtractArgs& args, std::ostream& out);
void stats(const std::filesystem::path& index, std::ostream& out);
void bench(const BenchArgs& args, std::ostream& out);

/// Runs one query against a loaded index with the selected engine.
std::vector<ScoredDoc> run_query(const LoadedIndex& loaded, const Query& q, Algo algo, std::size_t k,
                                 const std::vector<std::string>* corpus);

/// Fixed 6-decimal rendering independent of the global locale.
std::string format_score(double score);
/// `rank \t doc \t score` lines.
void write_results(std::ostream& out, const std::vector<ScoredDoc>& results);

/// Parses "A..B".
std::pair<Position, Position> parse_range(std::string_view text);
/// Parses "word,j".
std::pair<std::string, std::uint64_t> parse_hit(std::string_view text);

}  // namespace wtbc::cli
