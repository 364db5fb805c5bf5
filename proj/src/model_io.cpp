#include "gearcheck/model_io.hpp"

#include "gearcheck/error.hpp"

#include <fstream>

namespace gearcheck {

using nlohmann::json;

json to_json(const ModelFile& file) {
    const auto& m = file.model;
    json doc;
    doc["version"] = kModelVersion;
    doc["preprocess"] = to_string(file.preprocess);
    doc["feature_set"] = to_string(file.feature_set);
    doc["classes"] = m.classes;
    json names = json::array();
    for (int c : m.classes) {
        names.push_back(class_name(c));
    }
    doc["class_names"] = names;
    doc["kernel"] = {{"kind", "gaussian"}, {"scale", m.kernel.scale}, {"c_penalty", m.kernel.c_penalty}};
    doc["standardizer"] = {{"input_dims", m.standardizer.input_dims},
                           {"retained", m.standardizer.retained},
                           {"mean", m.standardizer.mean},
                           {"std", m.standardizer.std_dev}};
    doc["dropped_features"] = m.standardizer.dropped;
    json models = json::array();
    for (const auto& b : m.models) {
        models.push_back({{"class_pair", {b.class_pair.first, b.class_pair.second}},
                          {"support_vectors", b.support_vectors},
                          {"dual_weights", b.dual_weights},
                          {"bias", b.bias}});
    }
    doc["models"] = models;
    return doc;
}

ModelFile model_from_json(const json& doc) {
    if (!doc.is_object() || !doc.contains("version")) {
        throw DataError("model file has no version field");
    }
    const auto version = doc.at("version").get<std::string>();
    if (version != kModelVersion) {
        throw DataError("unknown model version '" + version + "'");
    }
    try {
        ModelFile file;
        file.preprocess = parse_operator_kind(doc.at("preprocess").get<std::string>());
        file.feature_set = parse_feature_set(doc.at("feature_set").get<std::string>());
        auto& m = file.model;
        m.classes = doc.at("classes").get<std::vector<int>>();
        const auto& k = doc.at("kernel");
        m.kernel = KernelConfig{k.at("scale").get<double>(), k.at("c_penalty").get<double>()};
        m.kernel.validate();
        const auto& s = doc.at("standardizer");
        m.standardizer.input_dims = s.at("input_dims").get<std::size_t>();
        m.standardizer.retained = s.at("retained").get<std::vector<std::size_t>>();
        m.standardizer.mean = s.at("mean").get<std::vector<double>>();
        m.standardizer.std_dev = s.at("std").get<std::vector<double>>();
        m.standardizer.dropped = doc.at("dropped_features").get<std::vector<std::size_t>>();
        if (m.standardizer.mean.size() != m.standardizer.retained.size() ||
            m.standardizer.std_dev.size() != m.standardizer.retained.size()) {
            throw DataError("standardizer arrays disagree in length");
        }
        for (const auto& b : doc.at("models")) {
            BinarySvmModel binary;
            const auto pair = b.at("class_pair").get<std::vector<int>>();
            if (pair.size() != 2) {
                throw DataError("class_pair must have two entries");
            }
            binary.class_pair = {pair[0], pair[1]};
            binary.support_vectors = b.at("support_vectors").get<std::vector<FeatureRow>>();
            binary.dual_weights = b.at("dual_weights").get<std::vector<double>>();
            binary.bias = b.at("bias").get<double>();
            binary.kernel = m.kernel;
            if (binary.support_vectors.size() != binary.dual_weights.size()) {
                throw DataError("support vector and weight counts differ");
            }
            m.models.push_back(std::move(binary));
        }
        const auto n = m.classes.size();
        if (n < 2 || m.models.size() != n * (n - 1) / 2) {
            throw DataError("model must hold one binary machine per class pair");
        }
        return file;
    } catch (const json::exception& e) {
        throw DataError(std::string("malformed model file: ") + e.what());
    }
}

void save_model(const std::filesystem::path& path, const ModelFile& file) {
    std::ofstream out(path);
    if (!out) {
        throw DataError("cannot write model file " + path.string());
    }
    out << to_json(file).dump(2) << '\n';
}

ModelFile load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open model file " + path.string());
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw DataError("model file " + path.string() + " is not valid JSON: " + e.what());
    }
    return model_from_json(doc);
}

json to_json(const ConfusionMatrix& matrix) {
    json names = json::array();
    for (int c : matrix.classes()) {
        names.push_back(class_name(c));
    }
    return {{"classes", names},
            {"counts", matrix.counts()},
            {"total", matrix.total()},
            {"correct", matrix.correct()},
            {"accuracy", matrix.accuracy()}};
}

} // namespace gearcheck
