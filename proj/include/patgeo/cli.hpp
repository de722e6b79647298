#pragma once
// Command-line front end. Subcommands: validate, synth, variance,
// abstraction, ccgp, tree, mds, report. Every randomized analysis takes an
// explicit --seed (default 42) so runs are reproducible by default.

#include "patgeo/corpus.hpp"
#include "patgeo/geometry.hpp"
#include "patgeo/report.hpp"
#include "patgeo/synthetic.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace patgeo::cli {

namespace detail {

struct CorpusArgs {
    std::string corpus;
    std::string vocab_s;
    std::string vocab_h;
    std::string cat_map;

    void attach(CLI::App* cmd) {
        cmd->add_option("--corpus", corpus, "corpus file (JSON Lines)")->required();
        cmd->add_option("--symptom-vocab", vocab_s, "symptom vocabulary, one token per line")
            ->required();
        cmd->add_option("--herb-vocab", vocab_h, "herb vocabulary, one token per line")->required();
        cmd->add_option("--category-map", cat_map, "symptom category map CSV (token,category)");
    }

    Corpus load() const {
        std::optional<std::filesystem::path> cm;
        if (!cat_map.empty()) cm = cat_map;
        return load_corpus(corpus, vocab_s, vocab_h, cm);
    }
};

inline Space parse_space(const std::string& s) {
    if (s == "symptom") return Space::SymptomGrouped;
    if (s == "herb") return Space::Herb;
    throw Error(Errc::Usage, "--space must be 'symptom' or 'herb'");
}

inline std::string table_ext(OutputFormat f) { return f == OutputFormat::Csv ? ".csv" : ".json"; }

inline void emit_table(const RunConfig& config, const std::string& stem, const std::string& csv,
                       const std::string& json, std::ostream& out) {
    bool is_csv = config.format == OutputFormat::Csv;
    const std::string& content = is_csv ? csv : json;
    write_file(config.out_dir / (stem + table_ext(config.format)), content);
    out << content;
}

} // namespace detail

// Runs one subcommand; args exclude the program name. Returns the process
// exit status and never throws.
inline int run(std::vector<std::string> args, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
    CLI::App app{"geometry-of-pattern-identification analysis pipeline"};
    app.require_subcommand(1);

    detail::CorpusArgs corpus_args;
    RunConfig config;
    std::string space = "symptom";
    std::string format = "csv";
    std::string out_dir = "out";
    bool with_patterns = false;

    SyntheticSpec synth_spec;
    std::uint64_t synth_seed = 42;
    std::string synth_out = "synthetic";

    auto add_format = [&](CLI::App* cmd) {
        cmd->add_option("--format", format, "output table format")
            ->check(CLI::IsMember({"csv", "json"}));
        cmd->add_option("--out", out_dir, "output directory");
    };

    auto* validate = app.add_subcommand("validate", "load and validate a corpus");
    corpus_args.attach(validate);

    auto* synth = app.add_subcommand("synth", "generate a synthetic corpus with planted structure");
    synth->add_option("--out", synth_out, "directory for corpus.jsonl and vocabularies");
    synth->add_option("--n", synth_spec.n_provisions, "number of provisions");
    synth->add_option("--symptoms", synth_spec.n_symptoms, "raw symptom vocabulary size");
    synth->add_option("--groups", synth_spec.n_categories, "grouped symptom vocabulary size");
    synth->add_option("--herbs", synth_spec.n_herbs, "herb vocabulary size");
    synth->add_option("--beta-ext-int", synth_spec.beta[0], "Ext-Int planting strength in [0,1]");
    synth->add_option("--beta-cold-heat", synth_spec.beta[1], "Cold-Heat planting strength in [0,1]");
    synth->add_option("--beta-def-exc", synth_spec.beta[2], "Def-Exc planting strength in [0,1]");
    synth->add_option("--p0", synth_spec.p0, "base activation probability");
    synth->add_option("--planted-symptoms", synth_spec.planted_symptoms_per_axis,
                      "planted symptom columns per axis");
    synth->add_option("--planted-herbs", synth_spec.planted_herbs_per_axis,
                      "planted herb columns per axis");
    synth->add_option("--seed", synth_seed, "generator seed");

    auto* variance = app.add_subcommand("variance", "per-axis score variance");
    corpus_args.attach(variance);
    add_format(variance);

    auto* abstraction = app.add_subcommand("abstraction", "abstraction index with permutation test");
    corpus_args.attach(abstraction);
    abstraction->add_option("--space", space, "feature space")->check(CLI::IsMember({"symptom", "herb"}));
    abstraction->add_option("--permutations", config.permutations, "permutation count")
        ->check(CLI::PositiveNumber);
    abstraction->add_option("--seed", config.seed, "random seed");
    add_format(abstraction);

    auto* ccgp = app.add_subcommand("ccgp", "cross-conditional generalization table");
    corpus_args.attach(ccgp);
    ccgp->add_option("--space", space, "feature space")->check(CLI::IsMember({"symptom", "herb"}));
    ccgp->add_option("--iterations", config.iterations, "sampling iterations per cell")
        ->check(CLI::PositiveNumber);
    ccgp->add_option("--sample-size", config.sample_size,
                     "per-subgroup sample size (default: smallest subgroup)");
    ccgp->add_option("--C", config.svm_c, "SVM regularization parameter")->check(CLI::PositiveNumber);
    ccgp->add_option("--seed", config.seed, "random seed");
    add_format(ccgp);

    auto* tree = app.add_subcommand("tree", "herb-on-symptom regression tree depth sweep");
    corpus_args.attach(tree);
    tree->add_option("--depths", config.depths, "tree depths to sweep")->delimiter(',');
    tree->add_flag("--with-patterns", with_patterns, "append the three pattern-score columns");
    add_format(tree);

    auto* mds = app.add_subcommand("mds", "herb-space MDS embedding, colors, and manifold SVGs");
    corpus_args.attach(mds);
    add_format(mds);

    auto* report = app.add_subcommand("report", "full pipeline: all tables plus SVGs and a manifest");
    corpus_args.attach(report);
    report->add_option("--iterations", config.iterations, "CCGP iterations per cell")
        ->check(CLI::PositiveNumber);
    report->add_option("--permutations", config.permutations, "permutation count")
        ->check(CLI::PositiveNumber);
    report->add_option("--sample-size", config.sample_size,
                       "per-subgroup sample size (default: smallest subgroup)");
    report->add_option("--depths", config.depths, "tree depths to sweep")->delimiter(',');
    report->add_option("--C", config.svm_c, "SVM regularization parameter")->check(CLI::PositiveNumber);
    report->add_option("--seed", config.seed, "random seed");
    add_format(report);

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        config.format = format == "csv" ? OutputFormat::Csv : OutputFormat::Json;
        config.out_dir = out_dir;

        if (*validate) {
            Corpus corpus = corpus_args.load();
            out << "ok: provisions=" << corpus.size() << " symptoms=" << corpus.vocab_s().size()
                << " grouped=" << corpus.vocab_grouped().size()
                << " herbs=" << corpus.vocab_h().size() << "\n";
        } else if (*synth) {
            Corpus corpus = generate_synthetic(synth_spec, synth_seed);
            CorpusPaths paths = save_corpus(corpus, synth_out);
            out << "wrote " << paths.corpus.string() << " (" << corpus.size() << " provisions)\n";
        } else if (*variance) {
            Corpus corpus = corpus_args.load();
            auto v = dimension_variance(corpus);
            detail::emit_table(config, "variance", variance_csv(v), variance_json(v), out);
        } else if (*abstraction) {
            Corpus corpus = corpus_args.load();
            Space sp = detail::parse_space(space);
            auto rows = abstraction_rows(corpus, sp, config.permutations, config.seed);
            std::string stem = std::string("abstraction_") + (sp == Space::Herb ? "herb" : "symptom");
            detail::emit_table(config, stem, abstraction_csv(rows), abstraction_json(rows), out);
        } else if (*ccgp) {
            Corpus corpus = corpus_args.load();
            Space sp = detail::parse_space(space);
            CcgpTable table = ccgp_table(corpus, sp, config.sample_size, config.iterations,
                                         config.svm_c, config.seed);
            std::string stem = std::string("ccgp_") + (sp == Space::Herb ? "herb" : "symptom");
            detail::emit_table(config, stem, ccgp_csv(table), ccgp_json(table), out);
        } else if (*tree) {
            Corpus corpus = corpus_args.load();
            auto reports = depth_sweep(corpus, config.depths, with_patterns);
            std::string stem = with_patterns ? "tree_concat" : "tree_symptom";
            detail::emit_table(config, stem, tree_csv(reports), tree_json(reports), out);
        } else if (*mds) {
            Corpus corpus = corpus_args.load();
            Embedding3 embedding =
                classical_mds(distance_matrix(feature_matrix(corpus, Space::Herb)), 3);
            auto colors = rgb_colors(embedding);
            detail::emit_table(config, "embedding", embedding_csv(corpus, embedding, colors),
                               embedding_json(corpus, embedding, colors), out);
            const std::array<std::pair<Axis, Axis>, 3> pairs{
                std::pair{Axis::ExtInt, Axis::ColdHeat},
                std::pair{Axis::ExtInt, Axis::DefExc},
                std::pair{Axis::ColdHeat, Axis::DefExc},
            };
            for (auto [x, y] : pairs) {
                std::string name = svg_file_name(x, y);
                emit_scatter_svg(corpus, x, y, colors, config.out_dir / name);
                out << "wrote " << (config.out_dir / name).string() << "\n";
            }
        } else if (*report) {
            Corpus corpus = corpus_args.load();
            PipelineReport result = run_report(corpus, config);
            out << "report written to " << config.out_dir.string() << " (" << result.manifest.size()
                << " files + manifest)\n";
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

} // namespace patgeo::cli
