#include "gearcheck/report.hpp"

#include "gearcheck/error.hpp"
#include "gearcheck/model_io.hpp"
#include "gearcheck/parallel.hpp"

#include <cstdio>
#include <sstream>

namespace gearcheck {
namespace {

using nlohmann::json;

constexpr std::array<std::pair<OperatorKind, FeatureSet>, 4> kCells = {{
    {OperatorKind::RawPassthrough, FeatureSet::TimeOnly},
    {OperatorKind::RawPassthrough, FeatureSet::Combined},
    {OperatorKind::Ceeo, FeatureSet::TimeOnly},
    {OperatorKind::Ceeo, FeatureSet::Combined},
}};

std::string response_name(OperatorKind kind) {
    switch (kind) {
    case OperatorKind::RawPassthrough:
        return "Raw signal";
    case OperatorKind::EnergyOperator:
        return "EO signal";
    case OperatorKind::Ceeo:
        return "CEEO signal";
    }
    return "?";
}

std::string feature_set_name(FeatureSet set) {
    return set == FeatureSet::Combined ? "Time domain + Frequency domain" : "Time domain";
}

ReportCell run_cell(const std::vector<Signal>& signals, OperatorKind kind, FeatureSet set,
                    const ComparisonSettings& settings) {
    ReportCell cell;
    cell.preprocess = kind;
    cell.feature_set = set;
    try {
        FeatureTable table;
        table.set = set;
        for (const auto& s : signals) {
            try {
                table.rows.push_back(extract(s, kind, set));
            } catch (const DataError& e) {
                throw DataError(s.meta().source + ": " + e.what());
            }
        }
        const auto data = to_dataset(table);
        CvOptions options;
        options.parallel = settings.parallel;
        KernelConfig kernel{settings.kernel_scale.value_or(1.0), settings.c_penalty};
        if (!settings.kernel_scale) {
            cell.search = optimize_kernel_scale(data, settings.folds, settings.seed,
                                                settings.c_penalty, options);
            kernel = cell.search->best;
        }
        cell.kernel_scale = kernel.scale;
        auto cv = cross_validate(data, settings.folds, kernel, settings.seed, options);
        cell.matrix = std::move(cv.matrix);
        cell.fold_of = std::move(cv.fold_of);
        cell.ok = true;
    } catch (const std::exception& e) {
        cell.ok = false;
        cell.error = e.what();
    }
    return cell;
}

std::string percent(double accuracy) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f %%", 100.0 * accuracy);
    return buf;
}

} // namespace

ComparisonReport run_comparison(const std::vector<Signal>& signals,
                                const ComparisonSettings& settings) {
    if (signals.empty()) {
        throw DataError("no signals to evaluate");
    }
    ComparisonReport report;
    report.settings = settings;
    for (const auto& s : signals) {
        if (!s.meta().health) {
            throw DataError("signal " + s.meta().source + " has no health label");
        }
        report.sources.push_back(s.meta().source);
        report.labels.push_back(static_cast<int>(*s.meta().health));
    }
    report.fold_map = assign_folds(report.labels, settings.folds, settings.seed);

    report.cells.resize(kCells.size());
    parallel_for(kCells.size(), settings.parallel, [&](std::size_t c) {
        report.cells[c] = run_cell(signals, kCells[c].first, kCells[c].second, settings);
    });
    for (auto& cell : report.cells) {
        if (cell.ok && cell.fold_of != report.fold_map) {
            throw Error("internal: evaluation cells disagree on fold assignment");
        }
    }
    return report;
}

json to_json(const ComparisonReport& report) {
    json doc;
    doc["version"] = kReportVersion;
    doc["environment"] = {
        {"artifact_version", GEARCHECK_VERSION},
        {"seed", report.settings.seed},
        {"timestamp", report.timestamp},
        {"config", report.config_echo},
        {"settings",
         {{"folds", report.settings.folds},
          {"c_penalty", report.settings.c_penalty},
          {"kernel_scale", report.settings.kernel_scale ? json(*report.settings.kernel_scale)
                                                        : json("auto")},
          {"parallel", report.settings.parallel}}},
    };
    json samples = json::array();
    for (std::size_t i = 0; i < report.sources.size(); ++i) {
        samples.push_back({{"source", report.sources[i]},
                           {"label", class_name(report.labels[i])},
                           {"fold", report.fold_map[i]}});
    }
    doc["fold_map"] = samples;

    json cells = json::array();
    for (const auto& cell : report.cells) {
        json c = {{"preprocess", to_string(cell.preprocess)},
                  {"feature_set", to_string(cell.feature_set)},
                  {"status", cell.ok ? "ok" : "failed"}};
        if (!cell.ok) {
            c["error"] = cell.error;
        } else {
            const auto& m = *cell.matrix;
            c["accuracy"] = m.accuracy();
            c["accuracy_percent"] = 100.0 * m.accuracy();
            c["accuracy_rational"] = std::to_string(m.correct()) + "/" + std::to_string(m.total());
            c["kernel_scale"] = cell.kernel_scale;
            c["kernel_scale_mode"] = cell.search ? "optimized" : "fixed";
            c["confusion_matrix"] = to_json(m);
            if (cell.search) {
                json trace = json::array();
                for (const auto& t : cell.search->trace) {
                    trace.push_back(
                        {{"multiplier", t.multiplier}, {"scale", t.scale}, {"accuracy", t.accuracy}});
                }
                c["scale_search"] = {{"median_distance", cell.search->median_distance},
                                     {"trace", trace}};
            }
        }
        cells.push_back(std::move(c));
    }
    doc["cells"] = cells;
    return doc;
}

std::string render_report(const ComparisonReport& report) {
    std::ostringstream out;
    char line[160];
    std::snprintf(line, sizeof line, "%-14s %-32s %-10s %-8s %s\n", "Response", "Types of features",
                  "Accuracy", "Exact", "Kernel scale");
    out << line;
    for (const auto& cell : report.cells) {
        if (cell.ok) {
            const auto& m = *cell.matrix;
            const std::string exact = std::to_string(m.correct()) + "/" + std::to_string(m.total());
            std::snprintf(line, sizeof line, "%-14s %-32s %-10s %-8s %.6g\n",
                          response_name(cell.preprocess).c_str(),
                          feature_set_name(cell.feature_set).c_str(), percent(m.accuracy()).c_str(),
                          exact.c_str(), cell.kernel_scale);
        } else {
            std::snprintf(line, sizeof line, "%-14s %-32s FAILED: %s\n",
                          response_name(cell.preprocess).c_str(),
                          feature_set_name(cell.feature_set).c_str(), cell.error.c_str());
        }
        out << line;
    }

    for (const auto& cell : report.cells) {
        if (!cell.ok) {
            continue;
        }
        const auto& m = *cell.matrix;
        out << '\n' << response_name(cell.preprocess) << " / " << feature_set_name(cell.feature_set)
            << " (rows: true class, columns: predicted)\n";
        std::snprintf(line, sizeof line, "%-10s", "");
        out << line;
        for (int c : m.classes()) {
            std::snprintf(line, sizeof line, "%9s", class_name(c).c_str());
            out << line;
        }
        out << '\n';
        for (std::size_t i = 0; i < m.classes().size(); ++i) {
            std::snprintf(line, sizeof line, "%-10s", class_name(m.classes()[i]).c_str());
            out << line;
            for (std::size_t j = 0; j < m.classes().size(); ++j) {
                std::snprintf(line, sizeof line, "%9zu", m.count(i, j));
                out << line;
            }
            out << '\n';
        }
    }
    return out.str();
}

} // namespace gearcheck
