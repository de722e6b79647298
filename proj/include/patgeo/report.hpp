#pragma once
// Table serialization (CSV and JSON) and the end-to-end report runner that
// writes every analysis artifact plus a digest manifest.

#include "patgeo/ccgp.hpp"
#include "patgeo/corpus.hpp"
#include "patgeo/geometry.hpp"
#include "patgeo/io.hpp"
#include "patgeo/mds.hpp"
#include "patgeo/svg.hpp"
#include "patgeo/tree.hpp"

#include <json.hpp>

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace patgeo {

enum class OutputFormat { Csv, Json };

struct RunConfig {
    std::uint64_t seed = 42;
    int iterations = 1000;
    int permutations = 10000;
    std::vector<int> depths = default_tree_depths();
    std::size_t sample_size = 0; // 0 = smallest subgroup
    double svm_c = 1.0;
    OutputFormat format = OutputFormat::Csv;
    std::filesystem::path out_dir = "out";
};

// ---------------------------------------------------------------------------
// Row serialization
// ---------------------------------------------------------------------------

inline std::string variance_csv(const std::array<double, 3>& variance) {
    std::string out = "axis,variance\n";
    for (Axis a : all_axes)
        out += std::string(axis_name(a)) + "," +
               fmt_double(variance[static_cast<std::size_t>(static_cast<int>(a))]) + "\n";
    return out;
}

inline std::string variance_json(const std::array<double, 3>& variance) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (Axis a : all_axes)
        rows.push_back({{"axis", axis_name(a)},
                        {"variance", variance[static_cast<std::size_t>(static_cast<int>(a))]}});
    return rows.dump(2) + "\n";
}

struct AbstractionRow {
    Axis axis;
    Space space;
    AbstractionResult result;
};

inline std::string abstraction_csv(const std::vector<AbstractionRow>& rows) {
    std::string out = "axis,space,index,p_value,n_permutations\n";
    for (const auto& r : rows)
        out += std::string(axis_name(r.axis)) + "," + space_name(r.space) + "," +
               fmt_double(r.result.index) + "," + fmt_double(r.result.p_value) + "," +
               fmt_int(r.result.n_permutations) + "\n";
    return out;
}

inline std::string abstraction_json(const std::vector<AbstractionRow>& rows) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : rows)
        arr.push_back({{"axis", axis_name(r.axis)},
                       {"space", space_name(r.space)},
                       {"index", r.result.index},
                       {"p_value", r.result.p_value},
                       {"n_permutations", r.result.n_permutations}});
    return arr.dump(2) + "\n";
}

inline std::string ccgp_csv(const CcgpTable& table) {
    std::string out = "training_set,test_set,label,ccgp_mean,ccgp_std,iterations\n";
    for (const auto& c : table.cells)
        out += csv_field(c.training_set_name()) + "," + csv_field(c.test_set_name()) + "," +
               axis_name(c.label_axis) + "," + fmt_double(c.mean_accuracy) + "," +
               fmt_double(c.std_accuracy) + "," + fmt_int(c.n_iterations) + "\n";
    return out;
}

inline std::string ccgp_json(const CcgpTable& table) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& c : table.cells)
        arr.push_back({{"training_set", c.training_set_name()},
                       {"test_set", c.test_set_name()},
                       {"label", axis_name(c.label_axis)},
                       {"ccgp_mean", c.mean_accuracy},
                       {"ccgp_std", c.std_accuracy},
                       {"iterations", c.n_iterations}});
    return arr.dump(2) + "\n";
}

inline std::string tree_csv(const std::vector<TreeReport>& reports) {
    std::string out = "depth,feat1,imp1,feat2,imp2,feat3,imp3,n_features,r2\n";
    for (const auto& r : reports) {
        out += fmt_int(r.depth);
        for (const auto& [name, imp] : r.top_features)
            out += "," + csv_field(name) + "," + fmt_double(imp);
        out += "," + fmt_int(r.n_features_used) + "," + fmt_double(r.r2) + "\n";
    }
    return out;
}

inline std::string tree_json(const std::vector<TreeReport>& reports) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : reports)
        arr.push_back({{"depth", r.depth},
                       {"feat1", r.top_features[0].first},
                       {"imp1", r.top_features[0].second},
                       {"feat2", r.top_features[1].first},
                       {"imp2", r.top_features[1].second},
                       {"feat3", r.top_features[2].first},
                       {"imp3", r.top_features[2].second},
                       {"n_features", r.n_features_used},
                       {"r2", r.r2}});
    return arr.dump(2) + "\n";
}

inline std::string embedding_csv(const Corpus& corpus, const Embedding3& embedding,
                                 const std::vector<ColorCode>& colors) {
    std::string out = "id,x,y,z,r,g,b\n";
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const auto& c = colors[i];
        out += csv_field(corpus.provisions()[i].id) + "," + fmt_double(embedding.coords(i, 0)) +
               "," + fmt_double(embedding.coords(i, 1)) + "," + fmt_double(embedding.coords(i, 2)) +
               "," + fmt_int(c.r) + "," + fmt_int(c.g) + "," + fmt_int(c.b) + "\n";
    }
    return out;
}

inline std::string embedding_json(const Corpus& corpus, const Embedding3& embedding,
                                  const std::vector<ColorCode>& colors) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < corpus.size(); ++i)
        arr.push_back({{"id", corpus.provisions()[i].id},
                       {"x", embedding.coords(i, 0)},
                       {"y", embedding.coords(i, 1)},
                       {"z", embedding.coords(i, 2)},
                       {"r", colors[i].r},
                       {"g", colors[i].g},
                       {"b", colors[i].b}});
    return arr.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Pipeline report
// ---------------------------------------------------------------------------

struct ManifestEntry {
    std::string file; // name relative to the output directory
    std::size_t bytes = 0;
    std::string digest; // fnv1a64 of the file content
};

struct PipelineReport {
    std::array<double, 3> variance{};
    std::vector<AbstractionRow> abstraction_symptom;
    std::vector<AbstractionRow> abstraction_herb;
    CcgpTable ccgp_symptom;
    CcgpTable ccgp_herb;
    std::vector<TreeReport> tree_symptom;
    std::vector<TreeReport> tree_concat;
    std::vector<ManifestEntry> manifest;
};

namespace detail {

class ReportWriter {
public:
    ReportWriter(std::filesystem::path dir, OutputFormat format)
        : dir_(std::move(dir)), format_(format) {}

    void write_table(const std::string& stem, const std::string& csv, const std::string& json) {
        bool is_csv = format_ == OutputFormat::Csv;
        write(stem + (is_csv ? ".csv" : ".json"), is_csv ? csv : json);
    }

    void write(const std::string& name, const std::string& content) {
        write_file(dir_ / name, content);
        manifest.push_back({name, content.size(), fnv1a64_hex(content)});
    }

    std::vector<ManifestEntry> manifest;

private:
    std::filesystem::path dir_;
    OutputFormat format_;
};

inline std::string manifest_csv(const std::vector<ManifestEntry>& entries) {
    std::string out = "file,bytes,fnv1a64\n";
    for (const auto& e : entries)
        out += csv_field(e.file) + "," + fmt_int(static_cast<long long>(e.bytes)) + "," + e.digest +
               "\n";
    return out;
}

inline std::string manifest_json(const std::vector<ManifestEntry>& entries) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& e : entries)
        arr.push_back({{"file", e.file}, {"bytes", e.bytes}, {"fnv1a64", e.digest}});
    return arr.dump(2) + "\n";
}

} // namespace detail

inline std::vector<AbstractionRow> abstraction_rows(const Corpus& corpus, Space space,
                                                    int permutations, std::uint64_t seed) {
    std::vector<AbstractionRow> rows;
    for (Axis a : all_axes) {
        LabeledVectors data = labeled_vectors(corpus, space, a);
        std::uint64_t axis_seed = derive_seed(seed, static_cast<std::uint64_t>(a) + 17u *
                                                        static_cast<std::uint64_t>(space));
        rows.push_back({a, space, permutation_test(data, permutations, axis_seed)});
    }
    return rows;
}

inline std::string svg_file_name(Axis x, Axis y) {
    auto slug = [](Axis a) {
        switch (a) {
            case Axis::ExtInt: return "extint";
            case Axis::ColdHeat: return "coldheat";
            case Axis::DefExc: return "defexc";
        }
        return "?";
    };
    return std::string("manifold_") + slug(x) + "_" + slug(y) + ".svg";
}

// Runs the full pipeline and writes every artifact into config.out_dir:
// variance, abstraction (both spaces), CCGP (both spaces), tree sweeps
// (symptom-only and pattern-concatenated), the herb-space MDS embedding,
// the three manifold cross-section SVGs, and the manifest.
inline PipelineReport run_report(const Corpus& corpus, const RunConfig& config) {
    PipelineReport report;
    detail::ReportWriter writer(config.out_dir, config.format);

    report.variance = dimension_variance(corpus);
    writer.write_table("variance", variance_csv(report.variance), variance_json(report.variance));

    report.abstraction_symptom =
        abstraction_rows(corpus, Space::SymptomGrouped, config.permutations, config.seed);
    writer.write_table("abstraction_symptom", abstraction_csv(report.abstraction_symptom),
                       abstraction_json(report.abstraction_symptom));
    report.abstraction_herb =
        abstraction_rows(corpus, Space::Herb, config.permutations, config.seed);
    writer.write_table("abstraction_herb", abstraction_csv(report.abstraction_herb),
                       abstraction_json(report.abstraction_herb));

    report.ccgp_symptom = ccgp_table(corpus, Space::SymptomGrouped, config.sample_size,
                                     config.iterations, config.svm_c, derive_seed(config.seed, 101));
    writer.write_table("ccgp_symptom", ccgp_csv(report.ccgp_symptom), ccgp_json(report.ccgp_symptom));
    report.ccgp_herb = ccgp_table(corpus, Space::Herb, config.sample_size, config.iterations,
                                  config.svm_c, derive_seed(config.seed, 102));
    writer.write_table("ccgp_herb", ccgp_csv(report.ccgp_herb), ccgp_json(report.ccgp_herb));

    report.tree_symptom = depth_sweep(corpus, config.depths, false);
    writer.write_table("tree_symptom", tree_csv(report.tree_symptom), tree_json(report.tree_symptom));
    report.tree_concat = depth_sweep(corpus, config.depths, true);
    writer.write_table("tree_concat", tree_csv(report.tree_concat), tree_json(report.tree_concat));

    Embedding3 embedding = classical_mds(distance_matrix(feature_matrix(corpus, Space::Herb)), 3);
    std::vector<ColorCode> colors = rgb_colors(embedding);
    writer.write_table("embedding", embedding_csv(corpus, embedding, colors),
                       embedding_json(corpus, embedding, colors));

    const std::array<std::pair<Axis, Axis>, 3> pairs{
        std::pair{Axis::ExtInt, Axis::ColdHeat},
        std::pair{Axis::ExtInt, Axis::DefExc},
        std::pair{Axis::ColdHeat, Axis::DefExc},
    };
    for (auto [x, y] : pairs)
        writer.write(svg_file_name(x, y), render_scatter_svg(corpus, x, y, colors));

    report.manifest = writer.manifest;
    bool is_csv = config.format == OutputFormat::Csv;
    write_file(config.out_dir / (is_csv ? "manifest.csv" : "manifest.json"),
               is_csv ? detail::manifest_csv(report.manifest)
                      : detail::manifest_json(report.manifest));
    return report;
}

} // namespace patgeo
