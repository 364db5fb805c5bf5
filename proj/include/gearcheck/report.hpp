#pragma once

#include "gearcheck/ceeo.hpp"
#include "gearcheck/classify.hpp"
#include "gearcheck/features.hpp"
#include "gearcheck/signal.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace gearcheck {

inline constexpr std::string_view kReportVersion = "gearcheck-report-v1";

struct ComparisonSettings {
    std::size_t folds = 5;
    double c_penalty = 1.0;
    std::optional<double> kernel_scale; // empty: optimise per cell
    std::uint64_t seed = 0;
    bool parallel = false;
};

struct ReportCell {
    OperatorKind preprocess = OperatorKind::RawPassthrough;
    FeatureSet feature_set = FeatureSet::TimeOnly;
    bool ok = false;
    std::string error;
    std::optional<ConfusionMatrix> matrix;
    double kernel_scale = 0.0;
    std::optional<ScaleSearch> search;
    std::vector<std::size_t> fold_of;
};

struct ComparisonReport {
    ComparisonSettings settings;
    std::vector<std::string> sources;
    std::vector<int> labels;
    std::vector<std::size_t> fold_map;
    std::vector<ReportCell> cells; // raw/time, raw/combined, ceeo/time, ceeo/combined
    nlohmann::json config_echo = nlohmann::json::object();
    std::string timestamp;
};

// The four raw/CEEO x time/combined cells on one signal set and one fold
// assignment. A failing cell is recorded and does not stop the others.
ComparisonReport run_comparison(const std::vector<Signal>& signals,
                                const ComparisonSettings& settings);

nlohmann::json to_json(const ComparisonReport& report);

// Accuracy table (response x feature set) followed by each confusion matrix.
std::string render_report(const ComparisonReport& report);

} // namespace gearcheck
