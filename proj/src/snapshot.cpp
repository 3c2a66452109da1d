#include "auxnet/snapshot.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include <json.hpp>

#include "auxnet/errors.hpp"

namespace auxnet {
namespace {

using nlohmann::json;

constexpr const char* kFormat = "auxnet-knowledge-base";
constexpr int kVersion = 1;

const char* role_name(LayerRole role) {
    switch (role) {
        case LayerRole::kBase: return "base";
        case LayerRole::kMiddle: return "middle";
        case LayerRole::kAux: return "aux";
        case LayerRole::kEnd: return "end";
    }
    return "?";
}

json matrix_json(const Matrix& m) { return {{"rows", m.rows}, {"cols", m.cols}, {"data", m.data}}; }

json adam_json(const AdamState& s) { return {{"m", s.m}, {"v", s.v}, {"step", s.step_count}}; }

Matrix matrix_from(const json& j, const std::string& what) {
    Matrix m;
    m.rows = j.at("rows").get<std::size_t>();
    m.cols = j.at("cols").get<std::size_t>();
    m.data = j.at("data").get<std::vector<double>>();
    if (m.data.size() != m.rows * m.cols) throw DataError("snapshot: " + what + " has wrong element count");
    return m;
}

AdamState adam_from(const json& j, std::size_t expected, const std::string& what) {
    AdamState s;
    s.m = j.at("m").get<Vector>();
    s.v = j.at("v").get<Vector>();
    s.step_count = j.at("step").get<std::int64_t>();
    if (s.m.size() != expected || s.v.size() != expected) {
        throw DataError("snapshot: optimizer state of " + what + " has wrong size");
    }
    return s;
}

json config_json(const NetworkConfig& c) {
    return {{"base_layers", c.base_layers},
            {"middle_layers", c.middle_layers},
            {"aux_layers", c.aux_layers},
            {"end_layers", c.end_layers},
            {"nodes", c.nodes},
            {"num_classes", c.num_classes},
            {"num_base_features", c.num_base_features},
            {"eta", c.eta},
            {"beta", c.beta},
            {"lambda", c.lambda},
            {"seed", c.seed},
            {"optimizer", c.optimizer == OptimizerKind::kAdam ? "adam" : "sgd"}};
}

NetworkConfig config_from(const json& j) {
    NetworkConfig c;
    c.base_layers = j.at("base_layers").get<std::size_t>();
    c.middle_layers = j.at("middle_layers").get<std::size_t>();
    c.aux_layers = j.at("aux_layers").get<std::size_t>();
    c.end_layers = j.at("end_layers").get<std::size_t>();
    c.nodes = j.at("nodes").get<std::size_t>();
    c.num_classes = j.at("num_classes").get<std::size_t>();
    c.num_base_features = j.at("num_base_features").get<std::size_t>();
    c.eta = j.at("eta").get<double>();
    c.beta = j.at("beta").get<double>();
    c.lambda = j.at("lambda").get<double>();
    c.seed = j.at("seed").get<std::uint64_t>();
    const auto opt = j.at("optimizer").get<std::string>();
    if (opt == "adam") {
        c.optimizer = OptimizerKind::kAdam;
    } else if (opt == "sgd") {
        c.optimizer = OptimizerKind::kSgd;
    } else {
        throw DataError("snapshot: unknown optimizer '" + opt + "'");
    }
    return c;
}

}  // namespace

void write_snapshot(std::ostream& out, const KnowledgeBase& kb) {
    json doc;
    doc["format"] = kFormat;
    doc["version"] = kVersion;
    doc["config"] = config_json(kb.config);
    json layers = json::array();
    for (std::size_t z = 0; z < kb.layers.size(); ++z) {
        const auto& l = kb.layers[z];
        json adam_w = json::array();
        for (const auto& s : l.adam_W) adam_w.push_back(adam_json(s));
        layers.push_back({{"role", role_name(kb.role(z))},
                          {"alpha", l.alpha},
                          {"num_slots", l.num_slots},
                          {"W", matrix_json(l.W)},
                          {"c", l.c},
                          {"theta", matrix_json(l.theta)},
                          {"adam_W", std::move(adam_w)},
                          {"adam_c", adam_json(l.adam_c)},
                          {"adam_theta", adam_json(l.adam_theta)}});
    }
    doc["layers"] = std::move(layers);
    out << doc.dump() << '\n';
}

KnowledgeBase read_snapshot(std::istream& in) {
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw DataError(std::string("snapshot: invalid JSON: ") + e.what());
    }
    try {
        if (doc.at("format").get<std::string>() != kFormat) throw DataError("snapshot: unexpected format tag");
        if (doc.at("version").get<int>() != kVersion) throw DataError("snapshot: unsupported version");

        KnowledgeBase kb;
        kb.config = config_from(doc.at("config"));
        kb.config.validate();
        const auto& layers = doc.at("layers");
        if (layers.size() != kb.config.total_layers()) throw DataError("snapshot: layer count mismatch");
        const KnowledgeBase reference = init_knowledge_base(kb.config);

        for (std::size_t z = 0; z < layers.size(); ++z) {
            const auto& j = layers[z];
            const std::string what = "layer " + std::to_string(z);
            if (j.at("role").get<std::string>() != role_name(kb.role(z))) {
                throw DataError("snapshot: " + what + " has unexpected role");
            }
            LayerParams l;
            l.alpha = j.at("alpha").get<double>();
            l.num_slots = j.at("num_slots").get<std::size_t>();
            l.W = matrix_from(j.at("W"), what + " W");
            l.c = j.at("c").get<Vector>();
            l.theta = matrix_from(j.at("theta"), what + " theta");
            const auto& expected = reference.layers[z];
            if (l.num_slots != expected.num_slots || l.W.rows != expected.W.rows ||
                l.W.cols != expected.W.cols || l.c.size() != l.W.rows ||
                l.theta.rows != expected.theta.rows || l.theta.cols != expected.theta.cols) {
                throw DataError("snapshot: " + what + " has inconsistent shapes");
            }
            const auto& adam_w = j.at("adam_W");
            if (adam_w.size() != l.num_slots) throw DataError("snapshot: " + what + " slot state mismatch");
            for (const auto& s : adam_w) l.adam_W.push_back(adam_from(s, l.W.rows * l.slot_width(), what + " W"));
            l.adam_c = adam_from(j.at("adam_c"), l.c.size(), what + " c");
            l.adam_theta = adam_from(j.at("adam_theta"), l.theta.data.size(), what + " theta");
            kb.layers.push_back(std::move(l));
        }
        return kb;
    } catch (const json::exception& e) {
        throw DataError(std::string("snapshot: malformed document: ") + e.what());
    }
}

void save_snapshot(const std::filesystem::path& path, const KnowledgeBase& kb) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write snapshot '" + path.string() + "'");
    write_snapshot(out, kb);
    if (!out) throw IoError("error writing snapshot '" + path.string() + "'");
}

KnowledgeBase load_snapshot(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open snapshot '" + path.string() + "'");
    return read_snapshot(in);
}

}  // namespace auxnet
