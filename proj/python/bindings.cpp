#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gazeforge/core/rng.hpp"
#include "gazeforge/geometry/erp.hpp"
#include "gazeforge/metrics/metrics.hpp"
#include "gazeforge/model/mutual_information.hpp"
#include "gazeforge/pipeline/pipeline.hpp"
#include "gazeforge/simscene/multicam.hpp"
#include "gazeforge/simscene/scene_gen.hpp"
#include "gazeforge/tinynn/tape.hpp"

namespace py = pybind11;
namespace gf = gazeforge;

namespace {

std::vector<std::uint64_t> rng_draws(std::uint64_t seed, std::uint64_t stream, int n) {
    gf::core::RngStream rng(seed, stream);
    std::vector<std::uint64_t> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i) out.push_back(rng.next_u64());
    return out;
}

py::tuple erp_to_dir_py(double u, double v, double w, double h) {
    const auto d = gf::geometry::erp_to_dir(gf::core::ErpPoint(u, v, w, h));
    return py::make_tuple(d.d.x, d.d.y, d.d.z);
}

py::tuple dir_to_erp_py(double x, double y, double z, double w, double h) {
    const auto p = gf::geometry::dir_to_erp(
        gf::geometry::SphereDir::from_vector({x, y, z}), w, h);
    return py::make_tuple(p.u, p.v);
}

py::tuple head_to_dir_py(double pitch, double yaw, double roll) {
    const auto d = gf::geometry::head_to_dir({pitch, yaw, roll});
    return py::make_tuple(d.d.x, d.d.y, d.d.z);
}

std::vector<double> softmax_py(const std::vector<double>& v) {
    gf::tinynn::Tensor2 row(1, static_cast<int>(v.size()), v);
    return gf::tinynn::softmax_row(row).values();
}

double kl_py(const std::vector<double>& p, const std::vector<double>& q) {
    gf::tinynn::Tensor2 pr(1, static_cast<int>(p.size()), p);
    gf::tinynn::Tensor2 qr(1, static_cast<int>(q.size()), q);
    return gf::tinynn::kl_divergence(pr, qr);
}

int gaze_accuracy_py(double u, double v, const std::vector<std::array<double, 4>>& boxes,
                     double w, double h) {
    std::vector<gf::core::BoundingBox> bbs;
    for (const auto& b : boxes) bbs.push_back({b[0], b[1], b[2], b[3]});
    return gf::metrics::gaze_accuracy(gf::core::ErpPoint(u, v, w, h), bbs);
}

double cawf1_py(const std::vector<double>& fcc, const std::vector<double>& bf1) {
    if (fcc.size() != bf1.size()) throw std::invalid_argument("cawf1: length mismatch");
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < fcc.size(); ++i) {
        num += fcc[i] * bf1[i];
        den += fcc[i];
    }
    if (!(den > 0.0)) throw std::invalid_argument("cawf1: all-zero FCC weights are undefined");
    return num / den;
}

py::dict classification_report_py(const std::vector<int>& truth, const std::vector<int>& pred) {
    const auto rep = gf::metrics::classification_report(truth, pred);
    py::dict out;
    out["accuracy"] = rep.accuracy;
    out["macro_f1"] = rep.macro_f1;
    py::list f1;
    for (double v : rep.f1) f1.append(v);
    out["f1"] = f1;
    py::list confusion;
    for (const auto& row : rep.confusion) {
        py::list r;
        for (int v : row) r.append(v);
        confusion.append(r);
    }
    out["confusion"] = confusion;
    return out;
}

std::vector<std::array<double, 3>> pr_curve_py(const std::vector<int>& truth,
                                               const std::vector<double>& scores) {
    std::vector<std::array<double, 3>> out;
    for (const auto& p : gf::metrics::pr_curve(truth, scores))
        out.push_back({p.threshold, p.recall, p.precision});
    return out;
}

py::dict scene_summary_py(std::uint64_t seed, int n_objects) {
    gf::simscene::SceneGenOptions opts;
    opts.n_objects = n_objects;
    const auto scene = gf::simscene::gen_scene(seed, opts);
    py::dict out;
    out["id"] = scene.id;
    out["objects"] = scene.objects.size();
    py::list boxes;
    for (const auto& o : scene.objects)
        boxes.append(py::make_tuple(o.bbox.x_min, o.bbox.y_min, o.bbox.x_max, o.bbox.y_max));
    out["boxes"] = boxes;
    return out;
}

double ring_triangulation_error_py(int cameras, double noise_sigma, std::uint64_t seed) {
    const auto rig = gf::geometry::make_ring_rig(cameras, 3.0, 1.7, 1000, 1000, 640, 360);
    gf::core::RngStream pos_rng(seed, 600);
    std::vector<double> errors;
    for (int k = 0; k < 16; ++k) {
        const gf::geometry::Vec3 head{pos_rng.uniform(-0.5, 0.5), pos_rng.uniform(-0.5, 0.5),
                                      1.7 + pos_rng.uniform(-0.2, 0.2)};
        gf::core::RngStream noise_rng(seed, 700 + static_cast<std::uint64_t>(k));
        try {
            const auto obs = gf::simscene::simulate_multicam(rig, head, noise_sigma, noise_rng);
            std::vector<std::pair<gf::geometry::CameraModel, gf::geometry::Vec2>> tri;
            for (const auto& o : obs) tri.emplace_back(rig.cameras[o.camera_index], o.pixel);
            errors.push_back((gf::geometry::triangulate(tri).point - head).norm());
        } catch (const std::exception&) {
        }
    }
    if (errors.empty()) return std::numeric_limits<double>::infinity();
    std::sort(errors.begin(), errors.end());
    return errors[errors.size() / 2];
}

py::dict run_pipeline_py(const std::string& out_dir, std::uint64_t seed,
                         const std::map<std::string, std::string>& overrides) {
    gf::pipeline::PipelineSpec spec;
    spec.seed = seed;
    for (const auto& [k, v] : overrides) spec.config.set(k, v);
    spec.split = spec.config.get_double("pipeline.split");
    spec.workers = spec.config.get_int("pipeline.workers");
    const auto result = gf::pipeline::run_pipeline(spec, out_dir);
    py::dict out;
    out["run_dir"] = result.run_dir.string();
    out["accuracy"] = result.accuracy;
    out["macro_f1"] = result.macro_f1;
    out["cawf1"] = result.cawf1;
    out["calibration_median_improvement"] = result.calibration_median_improvement;
    out["triangulation_median_m"] = result.triangulation_median_m;
    out["run_digest"] = result.run_digest;
    return out;
}

}  // namespace

PYBIND11_MODULE(_gazeforge, m) {
    m.doc() = "gazeforge: synthetic contextual-gaze emotion recognition toolkit";
    m.attr("__version__") = "0.1.0";

    m.def("rng_draws", &rng_draws, py::arg("seed"), py::arg("stream"), py::arg("n"),
          "raw 64-bit draws of the deterministic stream (seed, stream)");
    m.def("erp_to_dir", &erp_to_dir_py, py::arg("u"), py::arg("v"), py::arg("w") = 1920.0,
          py::arg("h") = 960.0);
    m.def("dir_to_erp", &dir_to_erp_py, py::arg("x"), py::arg("y"), py::arg("z"),
          py::arg("w") = 1920.0, py::arg("h") = 960.0);
    m.def("head_to_dir", &head_to_dir_py, py::arg("pitch"), py::arg("yaw"), py::arg("roll") = 0.0);
    m.def("dtw_distance", &gf::tinynn::dtw_distance, py::arg("x"), py::arg("x_hat"));
    m.def("mse", &gf::tinynn::mse, py::arg("x"), py::arg("x_hat"));
    m.def("softmax", &softmax_py, py::arg("v"));
    m.def("kl_divergence", &kl_py, py::arg("p"), py::arg("q"));
    m.def("mi_estimate", &gf::model::mi_estimate, py::arg("x"), py::arg("y"), py::arg("bins") = 4);
    m.def("gaze_accuracy", &gaze_accuracy_py, py::arg("u"), py::arg("v"), py::arg("boxes"),
          py::arg("w") = 1920.0, py::arg("h") = 960.0);
    m.def("cosine_similarity", &gf::metrics::cosine_similarity, py::arg("a"), py::arg("b"));
    m.def("cawf1", &cawf1_py, py::arg("fcc"), py::arg("bf1"));
    m.def("classification_report", &classification_report_py, py::arg("truth"), py::arg("pred"));
    m.def("pr_curve", &pr_curve_py, py::arg("truth"), py::arg("scores"));
    m.def("scene_summary", &scene_summary_py, py::arg("seed"), py::arg("n_objects") = 8);
    m.def("ring_triangulation_error", &ring_triangulation_error_py, py::arg("cameras"),
          py::arg("noise_sigma"), py::arg("seed") = 42);
    m.def("run_pipeline", &run_pipeline_py, py::arg("out_dir"), py::arg("seed") = 42,
          py::arg("overrides") = std::map<std::string, std::string>{});
}
