#pragma once
// Synthetic corpus generator with planted structure.
//
// Each axis gets a designated block of symptom columns and herb columns.
// A planted column fires with probability (1 - beta) * p0 when the provision
// leans to the first pole, and (1 - beta) * p0 + beta when it leans to the
// second, so beta = 0 makes the column independent of the axis and beta = 1
// makes it exactly the second-pole indicator. All other columns are
// independent Bernoulli(p0) noise.

#include "patgeo/corpus.hpp"
#include "patgeo/rng.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace patgeo {

struct SyntheticSpec {
    std::size_t n_provisions = 242;
    std::size_t n_symptoms = 702;  // raw vocabulary size S
    std::size_t n_categories = 351; // grouped vocabulary size G
    std::size_t n_herbs = 170;
    std::array<double, 3> beta{0.0, 0.0, 0.0}; // planting strength per axis
    double p0 = 0.05;                          // base activation probability
    std::size_t planted_symptoms_per_axis = 4;
    std::size_t planted_herbs_per_axis = 4;
};

namespace detail {

inline std::string padded(const char* prefix, std::size_t i, int width) {
    std::string n = fmt_int(static_cast<long long>(i));
    std::string out = prefix;
    for (int k = static_cast<int>(n.size()); k < width; ++k) out += '0';
    return out + n;
}

} // namespace detail

inline void validate_spec(const SyntheticSpec& spec) {
    if (spec.n_provisions == 0 || spec.n_symptoms == 0 || spec.n_herbs == 0)
        throw Error(Errc::InvalidSpec, "sizes must be positive");
    if (spec.n_categories == 0 || spec.n_categories > spec.n_symptoms)
        throw Error(Errc::InvalidSpec, "n_categories must be in [1, n_symptoms]");
    if (spec.p0 < 0.0 || spec.p0 > 1.0)
        throw Error(Errc::InvalidSpec, "p0 must be in [0,1]");
    for (double b : spec.beta)
        if (b < 0.0 || b > 1.0) throw Error(Errc::InvalidSpec, "beta must be in [0,1]");
    if (3 * spec.planted_symptoms_per_axis > spec.n_symptoms)
        throw Error(Errc::InvalidSpec, "planted symptom blocks exceed vocabulary");
    if (3 * spec.planted_herbs_per_axis > spec.n_herbs)
        throw Error(Errc::InvalidSpec, "planted herb blocks exceed vocabulary");
}

// Columns planted for an axis: symptom block [a*P, a*P+P), herb block likewise.
inline std::pair<std::size_t, std::size_t> planted_symptom_range(const SyntheticSpec& spec, Axis a) {
    std::size_t p = spec.planted_symptoms_per_axis;
    std::size_t start = static_cast<std::size_t>(static_cast<int>(a)) * p;
    return {start, start + p};
}

inline std::pair<std::size_t, std::size_t> planted_herb_range(const SyntheticSpec& spec, Axis a) {
    std::size_t p = spec.planted_herbs_per_axis;
    std::size_t start = static_cast<std::size_t>(static_cast<int>(a)) * p;
    return {start, start + p};
}

inline Corpus generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed) {
    validate_spec(spec);

    Vocabulary vocab_s;
    for (std::size_t i = 0; i < spec.n_symptoms; ++i) vocab_s.add(detail::padded("s", i, 4));
    Vocabulary vocab_h;
    for (std::size_t i = 0; i < spec.n_herbs; ++i) vocab_h.add(detail::padded("h", i, 4));
    CategoryMap cat_map;
    if (spec.n_categories < spec.n_symptoms) {
        for (std::size_t i = 0; i < spec.n_symptoms; ++i)
            cat_map.set(vocab_s.token(i), detail::padded("c", i % spec.n_categories, 4));
    }

    std::vector<ProvisionData> rows;
    rows.reserve(spec.n_provisions);
    for (std::size_t i = 0; i < spec.n_provisions; ++i) {
        Rng rng = Rng::derived(seed, i);
        ProvisionData row;
        row.id = detail::padded("p", i, 5);
        row.scores.ext_int = rng.uniform_int(-3, 3);
        row.scores.cold_heat = rng.uniform_int(-3, 3);
        row.scores.def_exc = rng.uniform_int(-3, 3);

        auto planted_prob = [&](Axis a) {
            bool second = row.scores.on(a) > 0;
            double b = spec.beta[static_cast<std::size_t>(static_cast<int>(a))];
            return (1.0 - b) * spec.p0 + (second ? b : 0.0);
        };

        std::vector<double> symptom_p(spec.n_symptoms, spec.p0);
        std::vector<double> herb_p(spec.n_herbs, spec.p0);
        for (Axis a : all_axes) {
            double p = planted_prob(a);
            auto [s0, s1] = planted_symptom_range(spec, a);
            for (std::size_t s = s0; s < s1; ++s) symptom_p[s] = p;
            auto [h0, h1] = planted_herb_range(spec, a);
            for (std::size_t h = h0; h < h1; ++h) herb_p[h] = p;
        }

        for (std::size_t s = 0; s < spec.n_symptoms; ++s)
            if (rng.bernoulli(symptom_p[s])) row.symptoms.push_back(static_cast<std::uint32_t>(s));
        for (std::size_t h = 0; h < spec.n_herbs; ++h)
            if (rng.bernoulli(herb_p[h])) row.herbs.push_back(static_cast<std::uint32_t>(h));
        rows.push_back(std::move(row));
    }
    return Corpus(std::move(vocab_s), std::move(vocab_h), std::move(cat_map), rows);
}

} // namespace patgeo
