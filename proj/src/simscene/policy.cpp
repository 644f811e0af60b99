#include "gazeforge/simscene/policy.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace gazeforge::simscene {

void EmotionPolicy::validate() const {
    for (double w : {w_saliency, w_brightness, w_corner, w_detail})
        if (!std::isfinite(w)) throw PolicyParseError("policy: non-finite weight");
    if (!(mean_duration > 0.0)) throw PolicyParseError("policy: duration must be > 0");
    if (!(duration_dispersion >= 0.0)) throw PolicyParseError("policy: dispersion must be >= 0");
    if (revisit_prob < 0.0 || revisit_prob > 1.0)
        throw PolicyParseError("policy: revisit must be in [0,1]");
}

namespace {
// Positive emotions chase salient/bright regions, negative ones sink into
// dark corners; durations differ as a secondary cue.
const char* kDefaultPolicyText =
    "# gazeforge policy table: ordering weights over object features plus fixation stats\n"
    "Angry saliency=2.5 brightness=-2.0 corner=0.0 detail=0.5 duration=0.3 dispersion=0.05 revisit=0.35\n"
    "Disgust saliency=-2.5 brightness=-0.5 corner=1.0 detail=1.5 duration=0.4 dispersion=0.10 revisit=0.10\n"
    "Fear saliency=0.0 brightness=-2.5 corner=2.5 detail=0.0 duration=0.2 dispersion=0.05 revisit=0.30\n"
    "Happy saliency=2.5 brightness=2.5 corner=-1.5 detail=0.0 duration=0.5 dispersion=0.15 revisit=0.10\n"
    "Sad saliency=-1.0 brightness=-2.0 corner=-1.0 detail=-1.0 duration=0.7 dispersion=0.20 revisit=0.05\n"
    "Surprise saliency=2.5 brightness=1.0 corner=1.5 detail=1.5 duration=0.2 dispersion=0.05 revisit=0.20\n";
}  // namespace

PolicyTable PolicyTable::builtin_default() { return parse(kDefaultPolicyText, "<builtin>"); }

PolicyTable PolicyTable::parse(const std::string& text, const std::string& origin) {
    PolicyTable table;
    std::array<bool, core::kNumEmotions> seen{};
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string name;
        ls >> name;
        const auto label = core::emotion_from_string(name);
        if (!label)
            throw PolicyParseError(origin + ":" + std::to_string(lineno) +
                                   ": unknown emotion '" + name + "'");
        if (seen[static_cast<int>(*label)])
            throw PolicyParseError(origin + ":" + std::to_string(lineno) + ": duplicate emotion '" +
                                   name + "'");
        EmotionPolicy p;
        std::array<bool, 7> have{};
        std::string kv;
        while (ls >> kv) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos)
                throw PolicyParseError(origin + ":" + std::to_string(lineno) +
                                       ": expected key=value, got '" + kv + "'");
            const std::string key = kv.substr(0, eq);
            double value = 0.0;
            try {
                std::size_t used = 0;
                value = std::stod(kv.substr(eq + 1), &used);
                if (used != kv.size() - eq - 1) throw std::invalid_argument(kv);
            } catch (const std::exception&) {
                throw PolicyParseError(origin + ":" + std::to_string(lineno) +
                                       ": bad number in '" + kv + "'");
            }
            if (key == "saliency") { p.w_saliency = value; have[0] = true; }
            else if (key == "brightness") { p.w_brightness = value; have[1] = true; }
            else if (key == "corner") { p.w_corner = value; have[2] = true; }
            else if (key == "detail") { p.w_detail = value; have[3] = true; }
            else if (key == "duration") { p.mean_duration = value; have[4] = true; }
            else if (key == "dispersion") { p.duration_dispersion = value; have[5] = true; }
            else if (key == "revisit") { p.revisit_prob = value; have[6] = true; }
            else
                throw PolicyParseError(origin + ":" + std::to_string(lineno) + ": unknown key '" +
                                       key + "'");
        }
        for (bool h : have)
            if (!h)
                throw PolicyParseError(origin + ":" + std::to_string(lineno) +
                                       ": record for " + name + " is missing a key");
        p.validate();
        table.policies[static_cast<int>(*label)] = p;
        seen[static_cast<int>(*label)] = true;
    }
    for (int i = 0; i < core::kNumEmotions; ++i)
        if (!seen[i])
            throw PolicyParseError(origin + ": missing record for " +
                                   core::to_string(static_cast<core::EmotionLabel>(i)));
    return table;
}

PolicyTable PolicyTable::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw PolicyParseError("policy: cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), path.string());
}

std::string PolicyTable::to_text() const {
    std::ostringstream out;
    out << "# gazeforge policy table: ordering weights over object features plus fixation stats\n";
    char line[256];
    for (int i = 0; i < core::kNumEmotions; ++i) {
        const EmotionPolicy& p = policies[i];
        std::snprintf(line, sizeof(line),
                      "%s saliency=%g brightness=%g corner=%g detail=%g duration=%g dispersion=%g "
                      "revisit=%g\n",
                      core::to_string(static_cast<core::EmotionLabel>(i)), p.w_saliency,
                      p.w_brightness, p.w_corner, p.w_detail, p.mean_duration,
                      p.duration_dispersion, p.revisit_prob);
        out << line;
    }
    return out.str();
}

void PolicyTable::save(const std::filesystem::path& path) const {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("policy: cannot write " + path.string());
    out << to_text();
}

}  // namespace gazeforge::simscene
