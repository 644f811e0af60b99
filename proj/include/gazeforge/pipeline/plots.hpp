#pragma once

#include <map>
#include <string>

#include "gazeforge/core/types.hpp"
#include "gazeforge/metrics/metrics.hpp"

namespace gazeforge::pipeline {

// Standalone SVG documents with fixed number formatting so reruns are
// byte-identical.

// Numbered fixation markers with arrows over the scene's boxes.
std::string svg_scanpath(const core::Scene& scene, const core::Scanpath& scanpath);

// Row-normalized confusion heat grid.
std::string svg_confusion(const metrics::ClassificationReport& report);

// One polyline per class.
std::string svg_pr(const std::map<std::string, std::vector<metrics::PrPoint>>& curves);

void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace gazeforge::pipeline
