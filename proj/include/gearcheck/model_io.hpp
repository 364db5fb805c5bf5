#pragma once

#include "gearcheck/ceeo.hpp"
#include "gearcheck/classify.hpp"
#include "gearcheck/features.hpp"

#include <filesystem>
#include <string_view>

#include <json.hpp>

namespace gearcheck {

inline constexpr std::string_view kModelVersion = "gearcheck-model-v1";

// A trained classifier plus the extraction settings it expects.
struct ModelFile {
    McsvmModel model;
    OperatorKind preprocess = OperatorKind::Ceeo;
    FeatureSet feature_set = FeatureSet::Combined;
};

nlohmann::json to_json(const ModelFile& file);
// Throws DataError on a missing or unknown version field or a malformed body.
ModelFile model_from_json(const nlohmann::json& doc);

void save_model(const std::filesystem::path& path, const ModelFile& file);
ModelFile load_model(const std::filesystem::path& path);

nlohmann::json to_json(const ConfusionMatrix& matrix);

} // namespace gearcheck
