#pragma once
// Standalone SVG scatter plots of the pattern manifold: provisions placed by
// their signed scores on a chosen axis pair, filled with caller-provided
// colors. Output bytes are deterministic for identical inputs.

#include "patgeo/corpus.hpp"
#include "patgeo/io.hpp"
#include "patgeo/mds.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace patgeo {

namespace detail {

struct SvgLayout {
    static constexpr int width = 560;
    static constexpr int height = 560;
    static constexpr int margin = 60;
    static constexpr double score_min = -3.5;
    static constexpr double score_max = 3.5;

    static double map_x(double score) {
        double t = (score - score_min) / (score_max - score_min);
        return margin + t * (width - 2 * margin);
    }
    // SVG y grows downward; positive scores plot upward.
    static double map_y(double score) {
        double t = (score - score_min) / (score_max - score_min);
        return height - margin - t * (height - 2 * margin);
    }
};

inline std::string svg_num(double v) {
    // one decimal is plenty at this plot scale and keeps the bytes stable
    double r = std::floor(v * 10.0 + 0.5) / 10.0;
    return fmt_double(r);
}

} // namespace detail

inline std::string render_scatter_svg(const Corpus& corpus, Axis x_axis, Axis y_axis,
                                      const std::vector<ColorCode>& colors) {
    if (x_axis == y_axis) throw Error(Errc::SameAxis, "scatter axes must differ");
    if (colors.size() != corpus.size())
        throw Error(Errc::ShapeMismatch, "need one color per provision");

    using L = detail::SvgLayout;
    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
           fmt_int(L::width) + "\" height=\"" + fmt_int(L::height) + "\" viewBox=\"0 0 " +
           fmt_int(L::width) + " " + fmt_int(L::height) + "\">\n";
    svg += "  <rect x=\"0\" y=\"0\" width=\"" + fmt_int(L::width) + "\" height=\"" +
           fmt_int(L::height) + "\" fill=\"white\"/>\n";

    // gridlines at integer scores
    for (int s = -3; s <= 3; ++s) {
        std::string x = detail::svg_num(L::map_x(s));
        std::string y = detail::svg_num(L::map_y(s));
        svg += "  <line x1=\"" + x + "\" y1=\"" + detail::svg_num(L::map_y(L::score_min)) +
               "\" x2=\"" + x + "\" y2=\"" + detail::svg_num(L::map_y(L::score_max)) +
               "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        svg += "  <line x1=\"" + detail::svg_num(L::map_x(L::score_min)) + "\" y1=\"" + y +
               "\" x2=\"" + detail::svg_num(L::map_x(L::score_max)) + "\" y2=\"" + y +
               "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    }
    // zero axes
    svg += "  <line x1=\"" + detail::svg_num(L::map_x(0)) + "\" y1=\"" +
           detail::svg_num(L::map_y(L::score_min)) + "\" x2=\"" + detail::svg_num(L::map_x(0)) +
           "\" y2=\"" + detail::svg_num(L::map_y(L::score_max)) +
           "\" stroke=\"#888888\" stroke-width=\"1\"/>\n";
    svg += "  <line x1=\"" + detail::svg_num(L::map_x(L::score_min)) + "\" y1=\"" +
           detail::svg_num(L::map_y(0)) + "\" x2=\"" + detail::svg_num(L::map_x(L::score_max)) +
           "\" y2=\"" + detail::svg_num(L::map_y(0)) +
           "\" stroke=\"#888888\" stroke-width=\"1\"/>\n";

    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const auto& scores = corpus.provisions()[i].scores;
        const ColorCode& c = colors[i];
        svg += "  <circle cx=\"" + detail::svg_num(L::map_x(scores.on(x_axis))) + "\" cy=\"" +
               detail::svg_num(L::map_y(scores.on(y_axis))) + "\" r=\"5\" fill=\"rgb(" +
               fmt_int(c.r) + "," + fmt_int(c.g) + "," + fmt_int(c.b) +
               ")\" fill-opacity=\"0.75\"/>\n";
    }

    // pole names at the axis ends, axis names centered
    std::string y_text = detail::svg_num(L::height - L::margin / 2.0);
    svg += "  <text x=\"" + detail::svg_num(L::map_x(L::score_min)) + "\" y=\"" + y_text +
           "\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"start\">" +
           pole_name(x_axis, Pole::First) + "</text>\n";
    svg += "  <text x=\"" + detail::svg_num(L::map_x(L::score_max)) + "\" y=\"" + y_text +
           "\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"end\">" +
           pole_name(x_axis, Pole::Second) + "</text>\n";
    svg += "  <text x=\"" + detail::svg_num(L::width / 2.0) + "\" y=\"" + y_text +
           "\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">" +
           axis_name(x_axis) + "</text>\n";

    std::string x_text = detail::svg_num(L::margin / 2.0);
    svg += "  <text x=\"" + x_text + "\" y=\"" + detail::svg_num(L::map_y(L::score_min)) +
           "\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">" +
           pole_name(y_axis, Pole::First) + "</text>\n";
    svg += "  <text x=\"" + x_text + "\" y=\"" + detail::svg_num(L::map_y(L::score_max)) +
           "\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">" +
           pole_name(y_axis, Pole::Second) + "</text>\n";
    svg += "  <text x=\"" + x_text + "\" y=\"" + detail::svg_num(L::height / 2.0) +
           "\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 " +
           x_text + " " + detail::svg_num(L::height / 2.0) + ")\">" + axis_name(y_axis) +
           "</text>\n";

    svg += "</svg>\n";
    return svg;
}

inline void emit_scatter_svg(const Corpus& corpus, Axis x_axis, Axis y_axis,
                             const std::vector<ColorCode>& colors,
                             const std::filesystem::path& out_path) {
    write_file(out_path, render_scatter_svg(corpus, x_axis, y_axis, colors));
}

} // namespace patgeo
