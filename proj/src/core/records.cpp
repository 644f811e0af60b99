#include "gazeforge/core/records.hpp"

#include <chrono>
#include <ctime>
#include <fstream>

#include "gazeforge/core/digest.hpp"

namespace gazeforge::core {

namespace {

const Json& require_field(const Json& j, const char* key, const char* record) {
    auto it = j.find(key);
    if (it == j.end())
        throw SchemaError(std::string(record) + ": missing field '" + key + "'");
    return *it;
}

template <typename T>
T field_as(const Json& j, const char* key, const char* record) {
    try {
        return require_field(j, key, record).get<T>();
    } catch (const SchemaError&) {
        throw;
    } catch (const std::exception&) {
        throw SchemaError(std::string(record) + ": field '" + key + "' has wrong type");
    }
}

}  // namespace

Json to_json(const ErpPoint& p) {
    return Json{{"u", p.u}, {"v", p.v}, {"w", p.width}, {"h", p.height}};
}

ErpPoint erp_point_from_json(const Json& j) {
    return ErpPoint(field_as<double>(j, "u", "ErpPoint"), field_as<double>(j, "v", "ErpPoint"),
                    field_as<double>(j, "w", "ErpPoint"), field_as<double>(j, "h", "ErpPoint"));
}

Json to_json(const Fixation& f) {
    Json j = to_json(f.point);
    j["t"] = f.t_start;
    j["dur"] = f.duration;
    j["target"] = f.target_object;
    if (f.clamped) j["clamped"] = true;
    return j;
}

Fixation fixation_from_json(const Json& j) {
    Fixation f;
    f.point = erp_point_from_json(j);
    f.t_start = field_as<double>(j, "t", "Fixation");
    f.duration = field_as<double>(j, "dur", "Fixation");
    f.target_object = field_as<int>(j, "target", "Fixation");
    f.clamped = j.value("clamped", false);
    return f;
}

Json to_json(const Scanpath& s) {
    Json fx = Json::array();
    for (const auto& f : s.fixations) fx.push_back(to_json(f));
    return Json{{"type", "scanpath"},
                {"subject", s.subject_id},
                {"emotion", to_string(s.emotion)},
                {"scene", s.scene_id},
                {"fixations", std::move(fx)}};
}

Scanpath scanpath_from_json(const Json& j) {
    Scanpath s;
    s.subject_id = field_as<std::string>(j, "subject", "Scanpath");
    const auto emotion = field_as<std::string>(j, "emotion", "Scanpath");
    auto parsed = emotion_from_string(emotion);
    if (!parsed) throw SchemaError("Scanpath: field 'emotion' has unknown value '" + emotion + "'");
    s.emotion = *parsed;
    s.scene_id = field_as<std::string>(j, "scene", "Scanpath");
    for (const auto& fj : require_field(j, "fixations", "Scanpath"))
        s.fixations.push_back(fixation_from_json(fj));
    s.validate();
    return s;
}

Json to_json(const BoundingBox& b) { return Json::array({b.x_min, b.y_min, b.x_max, b.y_max}); }

BoundingBox bbox_from_json(const Json& j) {
    if (!j.is_array() || j.size() != 4)
        throw SchemaError("BoundingBox: field 'bbox' must be an array of 4 numbers");
    return BoundingBox{j[0].get<double>(), j[1].get<double>(), j[2].get<double>(),
                       j[3].get<double>()};
}

Json to_json(const SceneObject& o) {
    Json j{{"id", o.id},
           {"bbox", to_json(o.bbox)},
           {"category", o.category},
           {"saliency", o.saliency},
           {"brightness", o.brightness},
           {"dynamic", o.dynamic}};
    if (o.motion_start) j["motion_start"] = to_json(*o.motion_start);
    return j;
}

SceneObject scene_object_from_json(const Json& j) {
    SceneObject o;
    o.id = field_as<int>(j, "id", "SceneObject");
    o.bbox = bbox_from_json(require_field(j, "bbox", "SceneObject"));
    o.category = field_as<std::string>(j, "category", "SceneObject");
    o.saliency = field_as<double>(j, "saliency", "SceneObject");
    o.brightness = field_as<double>(j, "brightness", "SceneObject");
    o.dynamic = field_as<bool>(j, "dynamic", "SceneObject");
    if (j.contains("motion_start")) o.motion_start = erp_point_from_json(j["motion_start"]);
    return o;
}

Json to_json(const Scene& s) {
    Json objs = Json::array();
    for (const auto& o : s.objects) objs.push_back(to_json(o));
    return Json{{"type", "scene"},
                {"id", s.id},
                {"w", s.width},
                {"h", s.height},
                {"lighting", to_string(s.lighting)},
                {"dynamic", s.dynamic},
                {"background_seed", s.background_seed},
                {"objects", std::move(objs)}};
}

Scene scene_from_json(const Json& j) {
    Scene s;
    s.id = field_as<std::string>(j, "id", "Scene");
    s.width = field_as<double>(j, "w", "Scene");
    s.height = field_as<double>(j, "h", "Scene");
    const auto lighting = field_as<std::string>(j, "lighting", "Scene");
    auto parsed = lighting_from_string(lighting);
    if (!parsed) throw SchemaError("Scene: field 'lighting' has unknown value '" + lighting + "'");
    s.lighting = *parsed;
    s.dynamic = field_as<bool>(j, "dynamic", "Scene");
    s.background_seed = field_as<std::uint64_t>(j, "background_seed", "Scene");
    for (const auto& oj : require_field(j, "objects", "Scene"))
        s.objects.push_back(scene_object_from_json(oj));
    s.validate();
    return s;
}

Json to_json(const RunManifest& m) {
    return Json{{"seed", m.seed},
                {"config_digest", m.config_digest},
                {"tool_version", m.tool_version},
                {"created_at", m.created_at}};
}

RunManifest manifest_from_json(const Json& j) {
    RunManifest m;
    m.seed = field_as<std::uint64_t>(j, "seed", "RunManifest");
    m.config_digest = field_as<std::string>(j, "config_digest", "RunManifest");
    m.tool_version = field_as<std::string>(j, "tool_version", "RunManifest");
    m.created_at = field_as<std::string>(j, "created_at", "RunManifest");
    return m;
}

bool operator==(const ErpPoint& a, const ErpPoint& b) {
    return a.u == b.u && a.v == b.v && a.width == b.width && a.height == b.height;
}

bool operator==(const Fixation& a, const Fixation& b) {
    return a.point == b.point && a.t_start == b.t_start && a.duration == b.duration &&
           a.target_object == b.target_object && a.clamped == b.clamped;
}

bool operator==(const Scanpath& a, const Scanpath& b) {
    return a.fixations == b.fixations && a.subject_id == b.subject_id && a.emotion == b.emotion &&
           a.scene_id == b.scene_id;
}

bool operator==(const BoundingBox& a, const BoundingBox& b) {
    return a.x_min == b.x_min && a.y_min == b.y_min && a.x_max == b.x_max && a.y_max == b.y_max;
}

bool operator==(const SceneObject& a, const SceneObject& b) {
    return a.id == b.id && a.bbox == b.bbox && a.category == b.category &&
           a.saliency == b.saliency && a.brightness == b.brightness && a.dynamic == b.dynamic &&
           a.motion_start == b.motion_start;
}

bool operator==(const Scene& a, const Scene& b) {
    return a.id == b.id && a.width == b.width && a.height == b.height && a.objects == b.objects &&
           a.background_seed == b.background_seed && a.lighting == b.lighting &&
           a.dynamic == b.dynamic;
}

namespace {

template <typename T, typename ToJson>
void save_jsonl(const std::filesystem::path& path, const std::vector<T>& records, ToJson conv) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_dataset: cannot open " + path.string());
    std::string body;
    for (const auto& r : records) {
        body += conv(r).dump();
        body += '\n';
    }
    out << body;
    if (!out) throw std::runtime_error("save_dataset: write failed for " + path.string());
    out.close();

    Json manifest{{"tool_version", kToolVersion},
                  {"records", records.size()},
                  {"digest", digest_string(body)}};
    std::ofstream mout(path.string() + ".manifest.json", std::ios::binary);
    if (!mout) throw std::runtime_error("save_dataset: cannot write manifest for " + path.string());
    mout << manifest.dump(2) << '\n';
}

template <typename T, typename FromJson>
std::vector<T> load_jsonl(const std::filesystem::path& path, FromJson conv) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load: cannot open " + path.string());
    std::vector<T> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        Json j;
        try {
            j = Json::parse(line);
        } catch (const std::exception& e) {
            throw SchemaError(path.string() + ":" + std::to_string(lineno) +
                              ": invalid record: " + e.what());
        }
        out.push_back(conv(j));
    }
    return out;
}

}  // namespace

void save_dataset(const std::filesystem::path& path, const std::vector<Scene>& records) {
    for (const auto& s : records) s.validate();
    save_jsonl(path, records, [](const Scene& s) { return to_json(s); });
}

void save_dataset(const std::filesystem::path& path, const std::vector<Scanpath>& records) {
    for (const auto& s : records) s.validate();
    save_jsonl(path, records, [](const Scanpath& s) { return to_json(s); });
}

std::vector<Scene> load_scenes(const std::filesystem::path& path) {
    return load_jsonl<Scene>(path, scene_from_json);
}

std::vector<Scanpath> load_scanpaths(const std::filesystem::path& path) {
    return load_jsonl<Scanpath>(path, scanpath_from_json);
}

void write_run_manifest(const std::filesystem::path& path, const RunManifest& manifest,
                        const Json& extra) {
    Json j = to_json(manifest);
    for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_run_manifest: cannot open " + path.string());
    out << j.dump(2) << '\n';
}

RunManifest read_run_manifest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_run_manifest: cannot open " + path.string());
    Json j = Json::parse(in);
    return manifest_from_json(j);
}

std::string now_iso8601() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return std::string(buf);
}

}  // namespace gazeforge::core
