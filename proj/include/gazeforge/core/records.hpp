#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "gazeforge/core/types.hpp"

namespace gazeforge::core {

using Json = nlohmann::ordered_json;

Json to_json(const ErpPoint& p);
Json to_json(const Fixation& f);
Json to_json(const Scanpath& s);
Json to_json(const BoundingBox& b);
Json to_json(const SceneObject& o);
Json to_json(const Scene& s);
Json to_json(const RunManifest& m);

ErpPoint erp_point_from_json(const Json& j);
Fixation fixation_from_json(const Json& j);
Scanpath scanpath_from_json(const Json& j);
BoundingBox bbox_from_json(const Json& j);
SceneObject scene_object_from_json(const Json& j);
Scene scene_from_json(const Json& j);
RunManifest manifest_from_json(const Json& j);

bool operator==(const ErpPoint& a, const ErpPoint& b);
bool operator==(const Fixation& a, const Fixation& b);
bool operator==(const Scanpath& a, const Scanpath& b);
bool operator==(const BoundingBox& a, const BoundingBox& b);
bool operator==(const SceneObject& a, const SceneObject& b);
bool operator==(const Scene& a, const Scene& b);

// One self-describing JSON record per line; a sibling `<path>.manifest.json`
// carries tool version, record count and the content digest.
void save_dataset(const std::filesystem::path& path, const std::vector<Scene>& records);
void save_dataset(const std::filesystem::path& path, const std::vector<Scanpath>& records);
std::vector<Scene> load_scenes(const std::filesystem::path& path);
std::vector<Scanpath> load_scanpaths(const std::filesystem::path& path);

void write_run_manifest(const std::filesystem::path& path, const RunManifest& manifest,
                        const Json& extra = Json::object());
RunManifest read_run_manifest(const std::filesystem::path& path);

std::string now_iso8601();

}  // namespace gazeforge::core
