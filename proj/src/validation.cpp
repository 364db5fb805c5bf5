#include "gearcheck/classify.hpp"

#include "gearcheck/error.hpp"
#include "gearcheck/parallel.hpp"
#include "gearcheck/seed.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

namespace gearcheck {

std::vector<std::size_t> assign_folds(std::span<const int> labels, std::size_t k,
                                      std::uint64_t seed) {
    if (k < 2) {
        throw DataError("cross-validation needs at least 2 folds");
    }
    std::map<int, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        by_class[labels[i]].push_back(i);
    }
    if (by_class.size() < 2) {
        throw DataError("cross-validation needs at least two classes");
    }
    for (const auto& [label, members] : by_class) {
        if (members.size() < k) {
            throw DataError("class " + class_name(label) + " has " +
                            std::to_string(members.size()) + " rows, fewer than the " +
                            std::to_string(k) + " folds requested");
        }
    }

    std::vector<std::size_t> fold_of(labels.size(), 0);
    std::size_t next = 0;
    for (auto& [label, members] : by_class) {
        std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(label)));
        std::shuffle(members.begin(), members.end(), rng);
        for (auto row : members) {
            fold_of[row] = next;
            next = (next + 1) % k;
        }
    }
    return fold_of;
}

CvResult cross_validate(const Dataset& data, std::size_t k, const KernelConfig& kernel,
                        std::uint64_t seed, const CvOptions& options) {
    kernel.validate();
    if (data.labels.size() != data.size()) {
        throw DataError("row and label counts differ");
    }
    CvResult result;
    result.fold_of = assign_folds(data.labels, k, seed);

    std::vector<int> classes = data.labels;
    std::sort(classes.begin(), classes.end());
    classes.erase(std::unique(classes.begin(), classes.end()), classes.end());

    result.predictions.assign(data.size(), 0);
    std::vector<McsvmModel> models(k);
    parallel_for(k, options.parallel, [&](std::size_t fold) {
        std::vector<std::size_t> train;
        std::vector<std::size_t> test;
        for (std::size_t i = 0; i < data.size(); ++i) {
            (result.fold_of[i] == fold ? test : train).push_back(i);
        }
        auto model = train_mcsvm(subset(data, train), kernel, options.solver);
        for (auto i : test) {
            result.predictions[i] = predict(model, data.rows[i]);
        }
        if (options.keep_models) {
            models[fold] = std::move(model);
        }
    });

    result.matrix = ConfusionMatrix(classes);
    for (std::size_t i = 0; i < data.size(); ++i) {
        result.matrix.add(data.labels[i], result.predictions[i]);
    }
    result.accuracy = result.matrix.accuracy();
    if (options.keep_models) {
        result.fold_models = std::move(models);
    }
    return result;
}

double median_pairwise_distance(const Dataset& data) {
    const auto standardizer = fit_standardizer(data.rows);
    const auto scaled = standardizer.transform(data.rows);
    std::vector<double> distances;
    distances.reserve(scaled.size() * (scaled.size() - 1) / 2);
    for (std::size_t i = 0; i < scaled.size(); ++i) {
        for (std::size_t j = i + 1; j < scaled.size(); ++j) {
            double d2 = 0.0;
            for (std::size_t f = 0; f < scaled[i].size(); ++f) {
                const double d = scaled[i][f] - scaled[j][f];
                d2 += d * d;
            }
            distances.push_back(std::sqrt(d2));
        }
    }
    std::sort(distances.begin(), distances.end());
    const std::size_t m = distances.size();
    const double median =
        m % 2 == 1 ? distances[m / 2] : 0.5 * (distances[m / 2 - 1] + distances[m / 2]);
    if (!(median > 0.0)) {
        throw DataError("median pairwise distance is zero; cannot set a kernel scale");
    }
    return median;
}

ScaleSearch optimize_kernel_scale(const Dataset& data, std::size_t k, std::uint64_t seed,
                                  double c_penalty, const CvOptions& options) {
    ScaleSearch search;
    search.median_distance = median_pairwise_distance(data);
    search.trace.resize(kScaleMultipliers.size());
    parallel_for(kScaleMultipliers.size(), options.parallel, [&](std::size_t g) {
        KernelConfig kernel{search.median_distance * kScaleMultipliers[g], c_penalty};
        CvOptions inner = options;
        inner.parallel = false;
        inner.keep_models = false;
        const auto cv = cross_validate(data, k, kernel, seed, inner);
        search.trace[g] = {kScaleMultipliers[g], kernel.scale, cv.accuracy};
    });
    std::size_t best = 0;
    for (std::size_t g = 1; g < search.trace.size(); ++g) {
        if (search.trace[g].accuracy > search.trace[best].accuracy) {
            best = g;
        }
    }
    search.best = KernelConfig{search.trace[best].scale, c_penalty};
    return search;
}

} // namespace gearcheck
