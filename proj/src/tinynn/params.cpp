#include "gazeforge/tinynn/params.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "gazeforge/core/digest.hpp"

namespace gazeforge::tinynn {

Tensor2& ParamStore::add(const std::string& name, Tensor2 init) {
    if (entries_.count(name)) throw std::invalid_argument("ParamStore: duplicate name " + name);
    order_.push_back(name);
    Entry e;
    e.m = Tensor2(init.rows(), init.cols(), 0.0);
    e.v = Tensor2(init.rows(), init.cols(), 0.0);
    e.value = std::move(init);
    return entries_.emplace(name, std::move(e)).first->second.value;
}

bool ParamStore::has(const std::string& name) const { return entries_.count(name) > 0; }

Tensor2& ParamStore::param(const std::string& name) {
    auto it = entries_.find(name);
    if (it == entries_.end()) throw std::out_of_range("ParamStore: unknown name " + name);
    return it->second.value;
}

const Tensor2& ParamStore::param(const std::string& name) const {
    auto it = entries_.find(name);
    if (it == entries_.end()) throw std::out_of_range("ParamStore: unknown name " + name);
    return it->second.value;
}

void ParamStore::adam_update(const std::map<std::string, Tensor2>& grads, const AdamConfig& cfg) {
    ++step_;
    const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(step_));
    const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(step_));
    for (const auto& name : order_) {
        auto git = grads.find(name);
        if (git == grads.end()) continue;
        Entry& e = entries_.at(name);
        const Tensor2& g = git->second;
        if (!g.same_shape(e.value))
            throw std::invalid_argument("adam_update: gradient shape mismatch for " + name);
        for (std::size_t i = 0; i < e.value.size(); ++i) {
            e.m[i] = cfg.beta1 * e.m[i] + (1.0 - cfg.beta1) * g[i];
            e.v[i] = cfg.beta2 * e.v[i] + (1.0 - cfg.beta2) * g[i] * g[i];
            const double m_hat = e.m[i] / bc1;
            const double v_hat = e.v[i] / bc2;
            e.value[i] -= cfg.lr * m_hat / (std::sqrt(v_hat) + cfg.eps);
        }
    }
}

namespace {
void write_tensor(std::ostream& out, const char* tag, const std::string& name, const Tensor2& t) {
    out << tag << ' ' << name << ' ' << t.rows() << ' ' << t.cols() << '\n';
    char buf[32];
    for (std::size_t i = 0; i < t.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", t[i]);
        out << buf << ((i + 1) % 8 == 0 || i + 1 == t.size() ? '\n' : ' ');
    }
}

Tensor2 read_tensor(std::istream& in, const std::string& expect_tag, std::string& name) {
    std::string tag;
    int rows = 0, cols = 0;
    if (!(in >> tag >> name >> rows >> cols) || tag != expect_tag)
        throw std::runtime_error("checkpoint: expected '" + expect_tag + "' block");
    Tensor2 t(rows, cols);
    for (std::size_t i = 0; i < t.size(); ++i)
        if (!(in >> t[i])) throw std::runtime_error("checkpoint: truncated tensor " + name);
    return t;
}
}  // namespace

void ParamStore::save(const std::filesystem::path& path) const {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("ParamStore::save: cannot open " + path.string());
    out << "gazeforge-checkpoint 1\n";
    out << "step " << step_ << '\n';
    out << "params " << order_.size() << '\n';
    for (const auto& name : order_) {
        const Entry& e = entries_.at(name);
        write_tensor(out, "param", name, e.value);
        write_tensor(out, "m1", name, e.m);
        write_tensor(out, "m2", name, e.v);
    }
}

ParamStore ParamStore::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("ParamStore::load: cannot open " + path.string());
    std::string magic;
    int version = 0;
    in >> magic >> version;
    if (magic != "gazeforge-checkpoint" || version != 1)
        throw std::runtime_error("ParamStore::load: unrecognized checkpoint header");
    std::string tag;
    std::size_t count = 0;
    ParamStore store;
    in >> tag >> store.step_;
    if (tag != "step") throw std::runtime_error("ParamStore::load: missing step");
    in >> tag >> count;
    if (tag != "params") throw std::runtime_error("ParamStore::load: missing params count");
    for (std::size_t i = 0; i < count; ++i) {
        std::string name, name_m, name_v;
        Tensor2 value = read_tensor(in, "param", name);
        Tensor2 m = read_tensor(in, "m1", name_m);
        Tensor2 v = read_tensor(in, "m2", name_v);
        if (name_m != name || name_v != name)
            throw std::runtime_error("ParamStore::load: moment name mismatch for " + name);
        store.order_.push_back(name);
        store.entries_.emplace(name, Entry{std::move(value), std::move(m), std::move(v)});
    }
    return store;
}

std::string ParamStore::digest() const {
    core::Fnv1a64 h;
    h.update(std::to_string(step_));
    for (const auto& name : order_) {
        const Entry& e = entries_.at(name);
        h.update(name);
        h.update(e.value.values().data(), e.value.size() * sizeof(double));
        h.update(e.m.values().data(), e.m.size() * sizeof(double));
        h.update(e.v.values().data(), e.v.size() * sizeof(double));
    }
    return h.hex();
}

Tensor2 glorot_init(int rows, int cols, core::RngStream& rng) {
    Tensor2 t(rows, cols);
    const double a = std::sqrt(6.0 / (rows + cols));
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = rng.uniform(-a, a);
    return t;
}

}  // namespace gazeforge::tinynn
