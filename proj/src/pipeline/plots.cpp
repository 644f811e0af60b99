#include "gazeforge/pipeline/plots.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace gazeforge::pipeline {

namespace {

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return std::string(buf);
}

const char* kClassColors[core::kNumEmotions] = {"#c0392b", "#27ae60", "#8e44ad",
                                                "#f39c12", "#2980b9", "#16a085"};

}  // namespace

std::string svg_scanpath(const core::Scene& scene, const core::Scanpath& scanpath) {
    scanpath.validate();
    const double vw = 960.0, vh = 480.0;
    const double sx = vw / scene.width, sy = vh / scene.height;
    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(vw) << "\" height=\""
        << fmt(vh) << "\" viewBox=\"0 0 " << fmt(vw) << " " << fmt(vh) << "\">\n";
    svg << "<defs><marker id=\"arrow\" markerWidth=\"8\" markerHeight=\"8\" refX=\"6\" refY=\"3\" "
           "orient=\"auto\"><path d=\"M0,0 L6,3 L0,6 z\" fill=\"#333333\"/></marker></defs>\n";
    svg << "<rect x=\"0\" y=\"0\" width=\"" << fmt(vw) << "\" height=\"" << fmt(vh)
        << "\" fill=\"#f4f1ea\"/>\n";
    for (const auto& obj : scene.objects) {
        svg << "<rect x=\"" << fmt(obj.bbox.x_min * sx) << "\" y=\"" << fmt(obj.bbox.y_min * sy)
            << "\" width=\"" << fmt(obj.bbox.width() * sx) << "\" height=\""
            << fmt(obj.bbox.height() * sy)
            << "\" fill=\"#d8d2c4\" stroke=\"#8a8374\" stroke-width=\"1\"/>\n";
        svg << "<text x=\"" << fmt(obj.bbox.x_min * sx + 3.0) << "\" y=\""
            << fmt(obj.bbox.y_min * sy + 12.0) << "\" font-size=\"10\" fill=\"#6d6657\">"
            << obj.category << "</text>\n";
    }
    for (std::size_t i = 1; i < scanpath.fixations.size(); ++i) {
        const auto& a = scanpath.fixations[i - 1].point;
        const auto& b = scanpath.fixations[i].point;
        svg << "<line x1=\"" << fmt(a.u * sx) << "\" y1=\"" << fmt(a.v * sy) << "\" x2=\""
            << fmt(b.u * sx) << "\" y2=\"" << fmt(b.v * sy)
            << "\" stroke=\"#333333\" stroke-width=\"1.5\" marker-end=\"url(#arrow)\"/>\n";
    }
    for (std::size_t i = 0; i < scanpath.fixations.size(); ++i) {
        const auto& p = scanpath.fixations[i].point;
        const double r = 6.0 + 10.0 * scanpath.fixations[i].duration;
        svg << "<circle cx=\"" << fmt(p.u * sx) << "\" cy=\"" << fmt(p.v * sy) << "\" r=\""
            << fmt(r) << "\" fill=\""
            << kClassColors[static_cast<int>(scanpath.emotion)]
            << "\" fill-opacity=\"0.75\" stroke=\"#222222\"/>\n";
        svg << "<text x=\"" << fmt(p.u * sx) << "\" y=\"" << fmt(p.v * sy + 3.5)
            << "\" font-size=\"9\" text-anchor=\"middle\" fill=\"#ffffff\">" << (i + 1)
            << "</text>\n";
    }
    svg << "<text x=\"8\" y=\"16\" font-size=\"13\" fill=\"#222222\">"
        << core::to_string(scanpath.emotion) << " / " << scanpath.subject_id << " / "
        << scanpath.scene_id << "</text>\n";
    svg << "</svg>\n";
    return svg.str();
}

std::string svg_confusion(const metrics::ClassificationReport& report) {
    const double cell = 56.0, left = 86.0, top = 56.0;
    const double w = left + cell * core::kNumEmotions + 12.0;
    const double h = top + cell * core::kNumEmotions + 12.0;
    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(w) << "\" height=\""
        << fmt(h) << "\">\n";
    svg << "<rect x=\"0\" y=\"0\" width=\"" << fmt(w) << "\" height=\"" << fmt(h)
        << "\" fill=\"#ffffff\"/>\n";
    for (int c = 0; c < core::kNumEmotions; ++c) {
        svg << "<text x=\"" << fmt(left + cell * c + cell / 2) << "\" y=\"" << fmt(top - 10.0)
            << "\" font-size=\"11\" text-anchor=\"middle\" fill=\"#333333\">"
            << core::to_string(static_cast<core::EmotionLabel>(c)) << "</text>\n";
    }
    for (int r = 0; r < core::kNumEmotions; ++r) {
        svg << "<text x=\"" << fmt(left - 8.0) << "\" y=\"" << fmt(top + cell * r + cell / 2 + 4.0)
            << "\" font-size=\"11\" text-anchor=\"end\" fill=\"#333333\">"
            << core::to_string(static_cast<core::EmotionLabel>(r)) << "</text>\n";
        for (int c = 0; c < core::kNumEmotions; ++c) {
            const double v = report.confusion_rows[r][c];
            const int shade = static_cast<int>(std::lround(255.0 * (1.0 - v)));
            char color[8];
            std::snprintf(color, sizeof(color), "#%02x%02xff", shade, shade);
            svg << "<rect x=\"" << fmt(left + cell * c) << "\" y=\"" << fmt(top + cell * r)
                << "\" width=\"" << fmt(cell - 2.0) << "\" height=\"" << fmt(cell - 2.0)
                << "\" fill=\"" << color << "\"/>\n";
            svg << "<text x=\"" << fmt(left + cell * c + cell / 2) << "\" y=\""
                << fmt(top + cell * r + cell / 2 + 4.0)
                << "\" font-size=\"11\" text-anchor=\"middle\" fill=\""
                << (v > 0.5 ? "#ffffff" : "#222222") << "\">" << fmt(v) << "</text>\n";
        }
    }
    svg << "</svg>\n";
    return svg.str();
}

std::string svg_pr(const std::map<std::string, std::vector<metrics::PrPoint>>& curves) {
    const double size = 420.0, pad = 48.0;
    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(size + 170.0)
        << "\" height=\"" << fmt(size) << "\">\n";
    svg << "<rect x=\"0\" y=\"0\" width=\"" << fmt(size + 170.0) << "\" height=\"" << fmt(size)
        << "\" fill=\"#ffffff\"/>\n";
    const double plot = size - 2 * pad;
    svg << "<rect x=\"" << fmt(pad) << "\" y=\"" << fmt(pad) << "\" width=\"" << fmt(plot)
        << "\" height=\"" << fmt(plot)
        << "\" fill=\"none\" stroke=\"#888888\" stroke-width=\"1\"/>\n";
    svg << "<text x=\"" << fmt(pad + plot / 2) << "\" y=\"" << fmt(size - 12.0)
        << "\" font-size=\"12\" text-anchor=\"middle\" fill=\"#333333\">recall</text>\n";
    svg << "<text x=\"14\" y=\"" << fmt(pad + plot / 2)
        << "\" font-size=\"12\" text-anchor=\"middle\" fill=\"#333333\" transform=\"rotate(-90 14 "
        << fmt(pad + plot / 2) << ")\">precision</text>\n";
    int idx = 0;
    for (const auto& [name, points] : curves) {
        const char* color = kClassColors[idx % core::kNumEmotions];
        std::ostringstream poly;
        for (const auto& p : points)
            poly << fmt(pad + p.recall * plot) << "," << fmt(pad + (1.0 - p.precision) * plot)
                 << " ";
        svg << "<polyline points=\"" << poly.str() << "\" fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"1.5\"/>\n";
        svg << "<text x=\"" << fmt(size + 8.0) << "\" y=\"" << fmt(pad + 16.0 * idx)
            << "\" font-size=\"11\" fill=\"" << color << "\">" << name << "</text>\n";
        ++idx;
    }
    svg << "</svg>\n";
    return svg.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_text_file: cannot open " + path.string());
    out << content;
}

}  // namespace gazeforge::pipeline
