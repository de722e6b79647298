#pragma once
// Corpus data model: provisions with binary symptom/herb vectors and signed
// three-axis pattern scores, plus file ingestion, validation, binarization,
// and subgroup partitioning.
//
// File formats:
//   corpus       JSON Lines, one provision per line:
//                {"id": "...", "symptoms": [...], "herbs": [...],
//                 "scores": {"ext_int": i, "cold_heat": i, "def_exc": i}}
//   vocabularies UTF-8 text, one token per line, index = line number
//   category map CSV with header "token,category"

#include "patgeo/errors.hpp"
#include "patgeo/io.hpp"
#include "patgeo/matrix.hpp"

#include <json.hpp>

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace patgeo {

// ---------------------------------------------------------------------------
// Axes and poles
// ---------------------------------------------------------------------------

enum class Axis : int { ExtInt = 0, ColdHeat = 1, DefExc = 2 };

// First pole corresponds to a negative score, Second to a positive one.
// First = {Ext, Cold, Def}, Second = {Int, Heat, Exc}.
enum class Pole : int { First = 0, Second = 1 };

inline constexpr std::array<Axis, 3> all_axes{Axis::ExtInt, Axis::ColdHeat, Axis::DefExc};

inline const char* axis_name(Axis a) {
    switch (a) {
        case Axis::ExtInt: return "Ext-Int";
        case Axis::ColdHeat: return "Cold-Heat";
        case Axis::DefExc: return "Def-Exc";
    }
    return "?";
}

inline const char* pole_name(Axis a, Pole p) {
    switch (a) {
        case Axis::ExtInt: return p == Pole::First ? "Ext" : "Int";
        case Axis::ColdHeat: return p == Pole::First ? "Cold" : "Heat";
        case Axis::DefExc: return p == Pole::First ? "Def" : "Exc";
    }
    return "?";
}

inline Pole opposite(Pole p) { return p == Pole::First ? Pole::Second : Pole::First; }

// ---------------------------------------------------------------------------
// Pattern scores
// ---------------------------------------------------------------------------

// 7-point scale: integers in [-3, +3], 0 = neutral. Negative leans toward
// the first-named pole, positive toward the second.
struct PatternScores {
    int ext_int = 0;
    int cold_heat = 0;
    int def_exc = 0;

    int on(Axis a) const {
        switch (a) {
            case Axis::ExtInt: return ext_int;
            case Axis::ColdHeat: return cold_heat;
            case Axis::DefExc: return def_exc;
        }
        return 0;
    }

    bool operator==(const PatternScores&) const = default;
};

inline void validate_scores(const PatternScores& s, const std::string& id) {
    for (Axis a : all_axes) {
        int v = s.on(a);
        if (v < -3 || v > 3)
            throw Error(Errc::ScoreOutOfRange, "provision '" + id + "' has score " +
                                                   fmt_int(v) + " on " + axis_name(a));
    }
}

// Score 0 has no pole; such provisions are excluded from binary analyses
// on that axis.
inline std::optional<Pole> binarize(const PatternScores& s, Axis axis) {
    int v = s.on(axis);
    if (v < 0) return Pole::First;
    if (v > 0) return Pole::Second;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Vocabularies and the category map
// ---------------------------------------------------------------------------

class Vocabulary {
public:
    Vocabulary() = default;
    explicit Vocabulary(std::vector<std::string> tokens) {
        for (auto& t : tokens) add(std::move(t));
    }

    std::uint32_t add(std::string token) {
        auto [it, inserted] = index_.emplace(token, static_cast<std::uint32_t>(tokens_.size()));
        if (!inserted) throw Error(Errc::DuplicateToken, "duplicate token '" + token + "'");
        tokens_.push_back(std::move(token));
        return it->second;
    }

    std::size_t size() const { return tokens_.size(); }
    const std::string& token(std::size_t i) const { return tokens_[i]; }
    const std::vector<std::string>& tokens() const { return tokens_; }

    std::optional<std::uint32_t> find(const std::string& token) const {
        auto it = index_.find(token);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    bool operator==(const Vocabulary& other) const { return tokens_ == other.tokens_; }

private:
    std::vector<std::string> tokens_;
    std::unordered_map<std::string, std::uint32_t> index_;
};

using SymptomVocabulary = Vocabulary;
using HerbVocabulary = Vocabulary;

// Raw symptom token -> category token. Tokens without an explicit entry map
// to themselves.
class CategoryMap {
public:
    CategoryMap() = default;

    void set(const std::string& token, const std::string& category) {
        auto [it, inserted] = map_.emplace(token, category);
        if (!inserted)
            throw Error(Errc::DuplicateToken, "token '" + token + "' mapped to more than one category");
    }

    const std::string& category_of(const std::string& token) const {
        auto it = map_.find(token);
        return it == map_.end() ? token : it->second;
    }

    const std::unordered_map<std::string, std::string>& entries() const { return map_; }

    bool operator==(const CategoryMap& other) const { return map_ == other.map_; }

private:
    std::unordered_map<std::string, std::string> map_;
};

// ---------------------------------------------------------------------------
// Provisions and the corpus
// ---------------------------------------------------------------------------

struct Provision {
    std::string id;
    std::vector<std::uint8_t> symptoms_raw;     // length S
    std::vector<std::uint8_t> symptoms_grouped; // length G, derived
    std::vector<std::uint8_t> herbs;            // length H
    PatternScores scores;

    bool operator==(const Provision&) const = default;
};

// Index-based provision input used by the loader, the synthetic generator,
// and programmatic construction.
struct ProvisionData {
    std::string id;
    std::vector<std::uint32_t> symptoms;
    std::vector<std::uint32_t> herbs;
    PatternScores scores;
};

class Corpus {
public:
    Corpus(SymptomVocabulary vocab_s, HerbVocabulary vocab_h, CategoryMap cat_map,
           const std::vector<ProvisionData>& rows)
        : vocab_s_(std::move(vocab_s)), vocab_h_(std::move(vocab_h)), cat_map_(std::move(cat_map)) {
        build_grouped_vocabulary();
        std::unordered_map<std::string, std::size_t> seen_ids;
        provisions_.reserve(rows.size());
        for (const auto& row : rows) {
            if (!seen_ids.emplace(row.id, provisions_.size()).second)
                throw Error(Errc::DuplicateId, "provision id '" + row.id + "' appears twice");
            validate_scores(row.scores, row.id);

            Provision p;
            p.id = row.id;
            p.scores = row.scores;
            p.symptoms_raw.assign(vocab_s_.size(), 0);
            p.herbs.assign(vocab_h_.size(), 0);
            for (std::uint32_t s : row.symptoms) {
                if (s >= vocab_s_.size())
                    throw Error(Errc::UnknownToken, "symptom index out of range in '" + row.id + "'");
                p.symptoms_raw[s] = 1;
            }
            for (std::uint32_t h : row.herbs) {
                if (h >= vocab_h_.size())
                    throw Error(Errc::UnknownToken, "herb index out of range in '" + row.id + "'");
                p.herbs[h] = 1;
            }
            p.symptoms_grouped.assign(vocab_g_.size(), 0);
            for (std::size_t s = 0; s < vocab_s_.size(); ++s)
                if (p.symptoms_raw[s]) p.symptoms_grouped[group_of_[s]] = 1;
            provisions_.push_back(std::move(p));
        }
    }

    const std::vector<Provision>& provisions() const { return provisions_; }
    std::size_t size() const { return provisions_.size(); }

    const SymptomVocabulary& vocab_s() const { return vocab_s_; }
    const HerbVocabulary& vocab_h() const { return vocab_h_; }
    const Vocabulary& vocab_grouped() const { return vocab_g_; }
    const CategoryMap& cat_map() const { return cat_map_; }

    // Raw symptom index -> grouped index.
    std::uint32_t group_of(std::size_t symptom_index) const { return group_of_[symptom_index]; }

    bool operator==(const Corpus& other) const {
        return provisions_ == other.provisions_ && vocab_s_ == other.vocab_s_ &&
               vocab_h_ == other.vocab_h_ && cat_map_ == other.cat_map_;
    }

private:
    // Grouped vocabulary in order of first appearance over raw tokens.
    void build_grouped_vocabulary() {
        group_of_.resize(vocab_s_.size());
        for (std::size_t s = 0; s < vocab_s_.size(); ++s) {
            const std::string& cat = cat_map_.category_of(vocab_s_.token(s));
            if (auto g = vocab_g_.find(cat)) {
                group_of_[s] = *g;
            } else {
                group_of_[s] = vocab_g_.add(cat);
            }
        }
        for (const auto& [token, category] : cat_map_.entries()) {
            if (!vocab_s_.find(token))
                throw Error(Errc::UnknownToken,
                            "category map entry for '" + token + "' is not in the symptom vocabulary");
            (void)category;
        }
    }

    std::vector<Provision> provisions_;
    SymptomVocabulary vocab_s_;
    HerbVocabulary vocab_h_;
    Vocabulary vocab_g_;
    CategoryMap cat_map_;
    std::vector<std::uint32_t> group_of_;
};

// ---------------------------------------------------------------------------
// Loading and saving
// ---------------------------------------------------------------------------

inline Vocabulary load_vocabulary(const std::filesystem::path& path) {
    Vocabulary v;
    for (const auto& line : read_lines(path)) v.add(line);
    return v;
}

inline CategoryMap load_category_map(const std::filesystem::path& path) {
    auto lines = read_lines(path);
    if (lines.empty() || csv_split(lines[0]) != std::vector<std::string>{"token", "category"})
        throw Error(Errc::Parse, "category map must start with header 'token,category': " + path.string());
    CategoryMap map;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        auto fields = csv_split(lines[i]);
        if (fields.size() != 2)
            throw Error(Errc::Parse, "bad category map row " + fmt_int(static_cast<long long>(i + 1)) +
                                         " in " + path.string());
        map.set(fields[0], fields[1]);
    }
    return map;
}

namespace detail {

inline int parse_score(const nlohmann::json& scores, const char* key, const std::string& id) {
    if (!scores.contains(key))
        throw Error(Errc::Parse, "provision '" + id + "' is missing scores." + key);
    const auto& v = scores.at(key);
    if (!v.is_number_integer())
        throw Error(Errc::ScoreOutOfRange, "provision '" + id + "' has non-integer " + key);
    return v.get<int>();
}

} // namespace detail

inline Corpus load_corpus(const std::filesystem::path& corpus_path,
                          const std::filesystem::path& vocab_s_path,
                          const std::filesystem::path& vocab_h_path,
                          const std::optional<std::filesystem::path>& cat_map_path = std::nullopt) {
    Vocabulary vocab_s = load_vocabulary(vocab_s_path);
    Vocabulary vocab_h = load_vocabulary(vocab_h_path);
    CategoryMap cat_map;
    if (cat_map_path) cat_map = load_category_map(*cat_map_path);

    std::vector<ProvisionData> rows;
    std::size_t line_no = 0;
    for (const auto& line : read_lines(corpus_path)) {
        ++line_no;
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object())
            throw Error(Errc::Parse, "invalid JSON on line " + fmt_int(static_cast<long long>(line_no)) +
                                         " of " + corpus_path.string());

        ProvisionData row;
        if (!j.contains("id") || !j.at("id").is_string())
            throw Error(Errc::Parse, "missing id on line " + fmt_int(static_cast<long long>(line_no)));
        row.id = j.at("id").get<std::string>();

        auto token_array = [&](const char* key) {
            if (!j.contains(key)) return nlohmann::json::array();
            const auto& arr = j.at(key);
            if (!arr.is_array())
                throw Error(Errc::Parse, "provision '" + row.id + "': " + key + " must be an array");
            for (const auto& tok : arr)
                if (!tok.is_string())
                    throw Error(Errc::Parse,
                                "provision '" + row.id + "': " + key + " entries must be strings");
            return arr;
        };
        for (const auto& tok : token_array("symptoms")) {
            auto idx = vocab_s.find(tok.get<std::string>());
            if (!idx)
                throw Error(Errc::UnknownToken, "symptom '" + tok.get<std::string>() +
                                                    "' in provision '" + row.id +
                                                    "' is not in the vocabulary");
            row.symptoms.push_back(*idx);
        }
        for (const auto& tok : token_array("herbs")) {
            auto idx = vocab_h.find(tok.get<std::string>());
            if (!idx)
                throw Error(Errc::UnknownToken, "herb '" + tok.get<std::string>() + "' in provision '" +
                                                    row.id + "' is not in the vocabulary");
            row.herbs.push_back(*idx);
        }

        if (!j.contains("scores") || !j.at("scores").is_object())
            throw Error(Errc::Parse, "provision '" + row.id + "' is missing scores");
        const auto& scores = j.at("scores");
        row.scores.ext_int = detail::parse_score(scores, "ext_int", row.id);
        row.scores.cold_heat = detail::parse_score(scores, "cold_heat", row.id);
        row.scores.def_exc = detail::parse_score(scores, "def_exc", row.id);

        rows.push_back(std::move(row));
    }
    return Corpus(std::move(vocab_s), std::move(vocab_h), std::move(cat_map), rows);
}

struct CorpusPaths {
    std::filesystem::path corpus;
    std::filesystem::path vocab_s;
    std::filesystem::path vocab_h;
    std::filesystem::path cat_map;
};

inline CorpusPaths corpus_paths(const std::filesystem::path& dir) {
    return {dir / "corpus.jsonl", dir / "symptoms.txt", dir / "herbs.txt", dir / "categories.csv"};
}

// Writes corpus.jsonl, symptoms.txt, herbs.txt and categories.csv into dir.
// load_corpus on the result reproduces the corpus exactly.
inline CorpusPaths save_corpus(const Corpus& corpus, const std::filesystem::path& dir) {
    CorpusPaths paths = corpus_paths(dir);
    std::filesystem::create_directories(dir);

    std::string jsonl;
    for (const auto& p : corpus.provisions()) {
        nlohmann::ordered_json j;
        j["id"] = p.id;
        auto symptoms = nlohmann::ordered_json::array();
        for (std::size_t s = 0; s < p.symptoms_raw.size(); ++s)
            if (p.symptoms_raw[s]) symptoms.push_back(corpus.vocab_s().token(s));
        j["symptoms"] = std::move(symptoms);
        auto herbs = nlohmann::ordered_json::array();
        for (std::size_t h = 0; h < p.herbs.size(); ++h)
            if (p.herbs[h]) herbs.push_back(corpus.vocab_h().token(h));
        j["herbs"] = std::move(herbs);
        j["scores"] = {{"ext_int", p.scores.ext_int},
                       {"cold_heat", p.scores.cold_heat},
                       {"def_exc", p.scores.def_exc}};
        jsonl += j.dump();
        jsonl += '\n';
    }
    write_file(paths.corpus, jsonl);

    std::string vs;
    for (const auto& t : corpus.vocab_s().tokens()) vs += t + "\n";
    write_file(paths.vocab_s, vs);
    std::string vh;
    for (const auto& t : corpus.vocab_h().tokens()) vh += t + "\n";
    write_file(paths.vocab_h, vh);

    // Entries in symptom-vocabulary order for deterministic bytes.
    std::string cm = "token,category\n";
    for (const auto& t : corpus.vocab_s().tokens()) {
        auto it = corpus.cat_map().entries().find(t);
        if (it != corpus.cat_map().entries().end())
            cm += csv_field(t) + "," + csv_field(it->second) + "\n";
    }
    write_file(paths.cat_map, cm);
    return paths;
}

// ---------------------------------------------------------------------------
// Subgroups
// ---------------------------------------------------------------------------

// One of the 12 subgroups: a pole combination on an unordered axis pair.
struct SubgroupKey {
    Axis axis_a;
    Pole pole_a;
    Axis axis_b;
    Pole pole_b;

    auto operator<=>(const SubgroupKey&) const = default;
};

inline SubgroupKey make_subgroup_key(Axis axis_a, Pole pole_a, Axis axis_b, Pole pole_b) {
    if (axis_a == axis_b) throw Error(Errc::SameAxis, "subgroup axes must differ");
    if (static_cast<int>(axis_a) > static_cast<int>(axis_b)) {
        std::swap(axis_a, axis_b);
        std::swap(pole_a, pole_b);
    }
    return {axis_a, pole_a, axis_b, pole_b};
}

inline std::string subgroup_name(const SubgroupKey& k) {
    return std::string(pole_name(k.axis_a, k.pole_a)) + "/" + pole_name(k.axis_b, k.pole_b);
}

// Every provision with nonzero scores on both axes lands in exactly one of
// the four subgroups; provisions with a zero score on either axis land in none.
inline std::map<SubgroupKey, std::vector<std::size_t>> partition_subgroups(const Corpus& corpus,
                                                                           Axis axis_a, Axis axis_b) {
    if (axis_a == axis_b) throw Error(Errc::SameAxis, "cannot partition on a single axis");
    std::map<SubgroupKey, std::vector<std::size_t>> groups;
    for (Pole pa : {Pole::First, Pole::Second})
        for (Pole pb : {Pole::First, Pole::Second})
            groups[make_subgroup_key(axis_a, pa, axis_b, pb)];

    const auto& provisions = corpus.provisions();
    for (std::size_t i = 0; i < provisions.size(); ++i) {
        auto pa = binarize(provisions[i].scores, axis_a);
        auto pb = binarize(provisions[i].scores, axis_b);
        if (!pa || !pb) continue;
        groups[make_subgroup_key(axis_a, *pa, axis_b, *pb)].push_back(i);
    }
    return groups;
}

// ---------------------------------------------------------------------------
// Feature matrices
// ---------------------------------------------------------------------------

enum class Space { SymptomRaw, SymptomGrouped, Herb };

inline const char* space_name(Space s) {
    switch (s) {
        case Space::SymptomRaw: return "symptom-raw";
        case Space::SymptomGrouped: return "symptom";
        case Space::Herb: return "herb";
    }
    return "?";
}

inline const std::vector<std::uint8_t>& space_bits(const Provision& p, Space space) {
    switch (space) {
        case Space::SymptomRaw: return p.symptoms_raw;
        case Space::SymptomGrouped: return p.symptoms_grouped;
        case Space::Herb: return p.herbs;
    }
    return p.symptoms_raw;
}

inline Matrix feature_matrix(const Corpus& corpus, Space space) {
    std::size_t dim = space == Space::SymptomRaw    ? corpus.vocab_s().size()
                      : space == Space::SymptomGrouped ? corpus.vocab_grouped().size()
                                                       : corpus.vocab_h().size();
    Matrix x(corpus.size(), dim);
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const auto& bits = space_bits(corpus.provisions()[i], space);
        for (std::size_t j = 0; j < dim; ++j) x(i, j) = bits[j];
    }
    return x;
}

} // namespace patgeo
