// Command-line front end: build | query | extract | stats | bench.

#include <wtbc/commands.hpp>

#include <CLI11.hpp>

#include <iostream>
#include <map>

namespace {

const std::map<std::string, wtbc::QueryMode> kModes{{"and", wtbc::QueryMode::conjunctive},
                                                    {"or", wtbc::QueryMode::disjunctive}};
const std::map<std::string, wtbc::cli::Algo> kAlgos{
    {"dr", wtbc::cli::Algo::dr}, {"drb", wtbc::cli::Algo::drb}, {"oracle", wtbc::cli::Algo::oracle}};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Compressed self-index with ranked document retrieval"};
    app.require_subcommand(1);

    wtbc::cli::BuildArgs build;
    auto* build_cmd = app.add_subcommand("build", "Index a directory or a delimited file");
    build_cmd->add_option("input", build.input, "Directory (one file per document) or single file")->required();
    build_cmd->add_option("output", build.output, "Index file to write")->required();
    build_cmd->add_flag("--drb", build.drb, "Add per-word tf bitmaps");
    build_cmd->add_option("--epsilon", build.epsilon, "idf threshold for bitmaps")->check(CLI::NonNegativeNumber);
    build_cmd->add_option("--block-size", build.block_size, "Bytemap counter sampling step")
        ->check(CLI::PositiveNumber);
    build_cmd->add_option("--delimiter", build.delimiter, "Document delimiter line for single-file input");
    build_cmd->add_option("--sentinel", build.sentinel, "Reserved document-end glyph");
    build_cmd->add_flag("--store-counters", build.store_counters, "Store rank counters instead of rebuilding");

    wtbc::cli::QueryArgs query;
    std::string corpus;
    auto* query_cmd = app.add_subcommand("query", "Top-k ranked retrieval, TSV output");
    query_cmd->add_option("index", query.index)->required();
    query_cmd->add_option("query", query.query)->required();
    query_cmd->add_option("--mode", query.mode)->transform(CLI::CheckedTransformer(kModes, CLI::ignore_case));
    query_cmd->add_option("--algo", query.algo)->transform(CLI::CheckedTransformer(kAlgos, CLI::ignore_case));
    query_cmd->add_option("-k", query.k, "Number of results");
    query_cmd->add_option("--corpus", corpus, "Original corpus (required by --algo oracle)");
    query_cmd->add_option("--delimiter", query.delimiter);

    wtbc::cli::ExtractArgs extract;
    std::uint64_t doc = 0;
    std::string pos;
    std::string hit;
    auto* extract_cmd = app.add_subcommand("extract", "Recover a document, a token range or a snippet");
    extract_cmd->add_option("index", extract.index)->required();
    auto* doc_opt = extract_cmd->add_option("--doc", doc, "Document id");
    auto* pos_opt = extract_cmd->add_option("--pos", pos, "Token range A..B");
    auto* hit_opt = extract_cmd->add_option("--hit", hit, "word,j: snippet around the j-th occurrence");
    extract_cmd->add_option("--window", extract.window, "Snippet half-width in tokens");
    doc_opt->excludes(pos_opt)->excludes(hit_opt);
    pos_opt->excludes(hit_opt);

    std::filesystem::path stats_index;
    auto* stats_cmd = app.add_subcommand("stats", "Space report");
    stats_cmd->add_option("index", stats_index)->required();

    wtbc::cli::BenchArgs bench;
    std::string bench_corpus;
    auto* bench_cmd = app.add_subcommand("bench", "Per-query latency, CSV output");
    bench_cmd->add_option("index", bench.index)->required();
    bench_cmd->add_option("queries", bench.queries, "One query per line")->required();
    bench_cmd->add_option("--mode", bench.mode)->transform(CLI::CheckedTransformer(kModes, CLI::ignore_case));
    bench_cmd->add_option("--algo", bench.algo)->transform(CLI::CheckedTransformer(kAlgos, CLI::ignore_case));
    bench_cmd->add_option("-k", bench.k);
    bench_cmd->add_option("--repeat", bench.repeat)->check(CLI::PositiveNumber);
    bench_cmd->add_option("--corpus", bench_corpus);
    bench_cmd->add_option("--delimiter", bench.delimiter);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*build_cmd) {
            wtbc::cli::build(build, std::cout);
        } else if (*query_cmd) {
            if (!corpus.empty()) {
                query.corpus = corpus;
            }
            wtbc::cli::query(query, std::cout);
        } else if (*extract_cmd) {
            if (*doc_opt) {
                extract.doc = doc;
            }
            if (*pos_opt) {
                extract.pos = wtbc::cli::parse_range(pos);
            }
            if (*hit_opt) {
                extract.hit = wtbc::cli::parse_hit(hit);
            }
            wtbc::cli::extract(extract, std::cout);
        } else if (*stats_cmd) {
            wtbc::cli::stats(stats_index, std::cout);
        } else if (*bench_cmd) {
            if (!bench_corpus.empty()) {
                bench.corpus = bench_corpus;
            }
            wtbc::cli::bench(bench, std::cout);
        }
    } catch (const wtbc::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
