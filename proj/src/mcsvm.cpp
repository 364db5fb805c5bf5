#include "gearcheck/classify.hpp"

#include "gearcheck/error.hpp"
#include "gearcheck/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace gearcheck {

McsvmModel train_mcsvm(const Dataset& data, const KernelConfig& kernel,
                       const SolverOptions& options, bool parallel) {
    kernel.validate();
    if (data.size() == 0) {
        throw DataError("cannot train on an empty table");
    }
    if (data.labels.size() != data.size()) {
        throw DataError("row and label counts differ");
    }
    McsvmModel model;
    model.kernel = kernel;
    model.classes = data.labels;
    std::sort(model.classes.begin(), model.classes.end());
    model.classes.erase(std::unique(model.classes.begin(), model.classes.end()),
                        model.classes.end());
    if (model.classes.size() < 2) {
        throw DataError("need at least two classes to train, found " +
                        std::to_string(model.classes.size()));
    }

    model.standardizer = fit_standardizer(data.rows);
    const auto scaled = model.standardizer.transform(data.rows);

    std::vector<std::pair<int, int>> pairs;
    for (std::size_t a = 0; a < model.classes.size(); ++a) {
        for (std::size_t b = a + 1; b < model.classes.size(); ++b) {
            pairs.emplace_back(model.classes[a], model.classes[b]);
        }
    }
    model.models.resize(pairs.size());
    parallel_for(pairs.size(), parallel, [&](std::size_t p) {
        const auto [pos, neg] = pairs[p];
        std::vector<FeatureRow> rows;
        std::vector<int> labels;
        for (std::size_t i = 0; i < data.size(); ++i) {
            if (data.labels[i] == pos || data.labels[i] == neg) {
                rows.push_back(scaled[i]);
                labels.push_back(data.labels[i] == pos ? 1 : -1);
            }
        }
        auto binary = train_binary_svm(rows, labels, kernel, options);
        binary.class_pair = pairs[p];
        model.models[p] = std::move(binary);
    });
    return model;
}

Prediction predict_detailed(const McsvmModel& model, std::span<const double> x) {
    const auto scaled = model.standardizer.transform(x);
    const std::size_t n = model.classes.size();
    const auto index_of = [&](int label) {
        return static_cast<std::size_t>(
            std::lower_bound(model.classes.begin(), model.classes.end(), label) -
            model.classes.begin());
    };

    Prediction out;
    out.votes.assign(n, 0);
    out.margin.assign(n, 0.0);
    for (const auto& binary : model.models) {
        const double f = binary.decision(scaled);
        // f == 0 goes to the negative class.
        const int winner = f > 0.0 ? binary.class_pair.first : binary.class_pair.second;
        const auto w = index_of(winner);
        out.votes[w] += 1;
        out.margin[w] += std::abs(f);
    }
    std::size_t best = 0;
    for (std::size_t c = 1; c < n; ++c) {
        if (out.votes[c] > out.votes[best] ||
            (out.votes[c] == out.votes[best] && out.margin[c] > out.margin[best])) {
            best = c;
        }
    }
    out.label = model.classes[best];
    return out;
}

int predict(const McsvmModel& model, std::span<const double> x) {
    return predict_detailed(model, x).label;
}

ConfusionMatrix::ConfusionMatrix(std::vector<int> classes)
    : classes_(std::move(classes)),
      counts_(classes_.size(), std::vector<std::size_t>(classes_.size(), 0)) {}

std::size_t ConfusionMatrix::index_of(int label) const {
    const auto it = std::find(classes_.begin(), classes_.end(), label);
    if (it == classes_.end()) {
        throw DataError("label " + std::to_string(label) + " not in confusion matrix");
    }
    return static_cast<std::size_t>(it - classes_.begin());
}

void ConfusionMatrix::add(int truth, int predicted) {
    counts_[index_of(truth)][index_of(predicted)] += 1;
}

std::size_t ConfusionMatrix::total() const {
    std::size_t sum = 0;
    for (const auto& row : counts_) {
        for (auto v : row) {
            sum += v;
        }
    }
    return sum;
}

std::size_t ConfusionMatrix::correct() const {
    std::size_t sum = 0;
    for (std::size_t i = 0; i < counts_.size(); ++i) {
        sum += counts_[i][i];
    }
    return sum;
}

double ConfusionMatrix::accuracy() const {
    const auto n = total();
    return n == 0 ? 0.0 : static_cast<double>(correct()) / static_cast<double>(n);
}

} // namespace gearcheck
