#include "gazeforge/core/config.hpp"

#include <fstream>
#include <stdexcept>

#include "gazeforge/core/digest.hpp"

namespace gazeforge::core {

namespace {
// key -> default value; the single source of truth for what exists
const std::map<std::string, std::string>& registry() {
    static const std::map<std::string, std::string> reg = {
        {"scene.width", "1920"},
        {"scene.height", "960"},
        {"scene.objects", "8"},
        {"scene.lighting", "normal"},
        {"scene.dynamic_fraction", "0.25"},
        {"scanpath.n_fix", "10"},
        {"scanpath.interval", "0.1"},
        {"scanpath.jitter", "0.15"},
        {"scanpath.temperature", "0.12"},
        {"scanpath.gap_prob", "0.3"},
        {"subject.bias_deg", "4.0"},
        {"subject.noise_deg", "0.5"},
        {"rig.cameras", "8"},
        {"rig.radius", "3.0"},
        {"rig.height", "1.7"},
        {"rig.fx", "1000"},
        {"rig.fy", "1000"},
        {"rig.cx", "640"},
        {"rig.cy", "360"},
        {"rig.k", "0.0"},
        {"rig.rate", "10"},
        {"rig.pixel_noise", "0.5"},
        {"fov.deg", "120"},
        {"fov.out", "64"},
        {"calib.omega_threshold", "0.5"},
        {"calib.hold", "0.1"},
        {"calib.v_threshold", "1.0"},
        {"calib.hint_radius_deg", "10"},
        {"calib.window_s", "0.3"},
        {"calib.window_weight", "2"},
        {"sio.patch_size", "16"},
        {"model.embed_dim", "32"},
        {"model.blocks", "2"},
        {"model.mlp_hidden", "64"},
        {"model.rnn_hidden", "32"},
        {"model.lr", "0.001"},
        {"model.batch", "16"},
        {"model.epochs", "80"},
        {"model.lambda", "0.1"},
        {"model.beta_sup", "0.1"},
        {"model.alpha_rec", "0.5"},
        {"model.beta_rec", "0.5"},
        {"model.dedup", "false"},
        {"model.reg_weight", "1.0"},
        {"model.adv_weight", "1.0"},
        {"model.smooth_hi", "0.9"},
        {"model.smooth_lo", "0.02"},
        {"metrics.alpha_fcc", "0.5"},
        {"metrics.beta_fcc", "0.5"},
        {"metrics.window", "48"},
        {"metrics.extractor", "hist48"},
        {"pipeline.scenes", "12"},
        {"pipeline.per_class", "100"},
        {"pipeline.split", "0.7"},
        {"pipeline.subjects", "4"},
        {"pipeline.workers", "1"},
        {"pipeline.sample_interval", "0.1"},
    };
    return reg;
}
}  // namespace

Config Config::defaults() {
    Config c;
    c.values_ = registry();
    return c;
}

void Config::set(const std::string& key, const std::string& value) {
    if (!registry().count(key)) throw std::invalid_argument("config: unknown key '" + key + "'");
    values_[key] = value;
}

void Config::apply_override(const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos)
        throw std::invalid_argument("config: override must be key=value, got '" + assignment + "'");
    set(assignment.substr(0, eq), assignment.substr(eq + 1));
}

void Config::load_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path.string());
    nlohmann::ordered_json j;
    try {
        j = nlohmann::ordered_json::parse(in);
    } catch (const std::exception& e) {
        throw std::runtime_error("config: parse error in " + path.string() + ": " + e.what());
    }
    if (!j.is_object()) throw std::runtime_error("config: " + path.string() + " must be an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        const auto& v = it.value();
        if (v.is_string()) set(it.key(), v.get<std::string>());
        else if (v.is_boolean()) set(it.key(), v.get<bool>() ? "true" : "false");
        else set(it.key(), v.dump());
    }
}

bool Config::known(const std::string& key) const { return registry().count(key) > 0; }

const std::string& Config::get(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw std::invalid_argument("config: unknown key '" + key + "'");
    return it->second;
}

double Config::get_double(const std::string& key) const {
    const std::string& s = get(key);
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: key '" + key + "' is not a number: '" + s + "'");
    }
}

int Config::get_int(const std::string& key) const {
    const double v = get_double(key);
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v)
        throw std::invalid_argument("config: key '" + key + "' is not an integer");
    return i;
}

std::uint64_t Config::get_u64(const std::string& key) const {
    const std::string& s = get(key);
    try {
        return std::stoull(s);
    } catch (const std::exception&) {
        throw std::invalid_argument("config: key '" + key + "' is not an unsigned integer: '" + s +
                                    "'");
    }
}

bool Config::get_bool(const std::string& key) const {
    const std::string& s = get(key);
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
    throw std::invalid_argument("config: key '" + key + "' is not a boolean: '" + s + "'");
}

std::string Config::digest() const {
    Fnv1a64 h;
    for (const auto& [k, v] : values_) {
        h.update(k);
        h.update("=", 1);
        h.update(v);
        h.update("\n", 1);
    }
    return h.hex();
}

nlohmann::ordered_json Config::to_json() const {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& [k, v] : values_) j[k] = v;
    return j;
}

}  // namespace gazeforge::core
