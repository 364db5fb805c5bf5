#include "gearcheck/classify.hpp"
#include "gearcheck/error.hpp"
#include "gearcheck/model_io.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

using namespace gearcheck;

namespace {

// n points per class around centres spaced `gap` apart on a diagonal.
Dataset blobs(std::size_t classes, std::size_t n, double gap, double spread, unsigned seed,
              std::size_t dims = 2) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> d(0.0, spread);
    Dataset data;
    for (std::size_t c = 0; c < classes; ++c) {
        for (std::size_t i = 0; i < n; ++i) {
            FeatureRow row(dims);
            for (std::size_t j = 0; j < dims; ++j) {
                row[j] = (j == c % dims ? gap * static_cast<double>(c + 1) : 0.0) + d(rng);
            }
            data.rows.push_back(row);
            data.labels.push_back(static_cast<int>(c));
        }
    }
    return data;
}

std::vector<int> binary_labels(const Dataset& d) {
    std::vector<int> y;
    for (int l : d.labels) y.push_back(l == 0 ? +1 : -1);
    return y;
}

void check_dual(const BinarySvmModel& m, const std::vector<FeatureRow>& rows, std::span<const int> y) {
    double sum = 0;
    for (double w : m.dual_weights) {
        sum += w;
        EXPECT_LE(std::abs(w), m.kernel.c_penalty + 1e-12);
    }
    EXPECT_LT(std::abs(sum), 1e-8);
    EXPECT_LT(kkt_residual(m, rows, y), 1e-3);
}

McsvmModel identity_model(std::vector<int> classes) {
    McsvmModel m;
    m.classes = std::move(classes);
    m.standardizer.input_dims = 1;
    m.standardizer.retained = {0};
    m.standardizer.mean = {0.0};
    m.standardizer.std_dev = {1.0};
    for (std::size_t i = 0; i < m.classes.size(); ++i) {
        for (std::size_t j = i + 1; j < m.classes.size(); ++j) {
            BinarySvmModel b;
            b.class_pair = {m.classes[i], m.classes[j]};
            m.models.push_back(b);
        }
    }
    return m;
}

} // namespace

TEST(Standardizer, TwoPoints) {
    auto s = fit_standardizer({{0.0}, {2.0}});
    EXPECT_DOUBLE_EQ(s.mean[0], 1.0);
    EXPECT_DOUBLE_EQ(s.std_dev[0], 1.0);
    EXPECT_DOUBLE_EQ(s.transform(FeatureRow{0.0})[0], -1.0);
    EXPECT_DOUBLE_EQ(s.transform(FeatureRow{2.0})[0], 1.0);
}

TEST(Standardizer, DropsConstantColumn) {
    auto s = fit_standardizer({{1.0, 5.0, 2.0}, {3.0, 5.0, 7.0}, {4.0, 5.0, -1.0}});
    EXPECT_EQ(s.dropped, std::vector<std::size_t>{1});
    EXPECT_EQ(s.retained, (std::vector<std::size_t>{0, 2}));
    EXPECT_EQ(s.transform(FeatureRow{1.0, 9.0, 0.0}).size(), 2u);
    EXPECT_THROW(s.transform(FeatureRow{1.0, 2.0}), DataError);
}

TEST(Standardizer, OwnRowsHaveZeroMean) {
    auto data = blobs(3, 20, 5.0, 2.0, 1, 4);
    for (auto& r : data.rows) r[2] = r[2] * 1e4 + 3e5;
    auto s = fit_standardizer(data.rows);
    auto z = s.transform(data.rows);
    for (std::size_t j = 0; j < z[0].size(); ++j) {
        double m = 0;
        for (auto& r : z) m += r[j];
        EXPECT_NEAR(m / z.size(), 0.0, 1e-12);
    }
}

TEST(BinarySvm, SymmetricPair) {
    std::vector<FeatureRow> rows{{-1.0}, {1.0}};
    std::vector<int> y{-1, +1};
    auto m = train_binary_svm(rows, y, {1.0, 1000.0});
    EXPECT_NEAR(m.decision(FeatureRow{0.0}), 0.0, 1e-6);
    EXPECT_LT(m.decision(rows[0]), 0.0);
    EXPECT_GT(m.decision(rows[1]), 0.0);
    check_dual(m, rows, y);
}

TEST(BinarySvm, Xor) {
    std::vector<FeatureRow> rows{{0, 0}, {0, 1}, {1, 0}, {1, 1}};
    std::vector<int> y{+1, -1, -1, +1};
    auto m = train_binary_svm(rows, y, {1.0, 10.0});
    for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(m.decision(rows[i]) > 0 ? 1 : -1, y[i]);
    check_dual(m, rows, y);
}

TEST(BinarySvm, SeparableBlobs) {
    auto data = blobs(2, 100, 8.0, 1.0, 3);
    auto y = binary_labels(data);
    auto m = train_binary_svm(data.rows, y, {2.0, 1.0});
    for (std::size_t i = 0; i < y.size(); ++i) EXPECT_EQ(m.decision(data.rows[i]) > 0 ? 1 : -1, y[i]);
    check_dual(m, data.rows, y);
    for (auto i : m.support_indices) EXPECT_LT(i, y.size());
}

TEST(BinarySvm, OverlappingBlobsStayFeasible) {
    auto data = blobs(2, 60, 1.0, 1.0, 4, 3);
    auto y = binary_labels(data);
    for (double c : {0.1, 1.0, 10.0}) check_dual(train_binary_svm(data.rows, y, {1.5, c}), data.rows, y);
}

TEST(BinarySvm, Errors) {
    std::vector<FeatureRow> rows{{0.0}, {1.0}};
    std::vector<int> same{1, 1};
    EXPECT_THROW(train_binary_svm(rows, same, {}), DataError);
    std::vector<int> bad{1, 0};
    EXPECT_THROW(train_binary_svm(rows, bad, {}), DataError);
    std::vector<int> y{1, -1};
    EXPECT_THROW(train_binary_svm(rows, y, {0.0, 1.0}), DataError);
    EXPECT_THROW(train_binary_svm(rows, y, {1.0, -1.0}), DataError);
}

TEST(Mcsvm, PairCounts) {
    for (std::size_t n : {2u, 3u, 4u}) {
        auto data = blobs(n, 10, 6.0, 1.0, 5, 4);
        auto m = train_mcsvm(data, {2.0, 1.0});
        EXPECT_EQ(m.models.size(), n * (n - 1) / 2);
        auto p = predict_detailed(m, data.rows[0]);
        int votes = 0;
        for (int v : p.votes) votes += v;
        EXPECT_EQ(static_cast<std::size_t>(votes), n * (n - 1) / 2);
    }
}

TEST(Mcsvm, SingleClassRejected) {
    Dataset d{{{1.0}, {2.0}}, {0, 0}};
    EXPECT_THROW(train_mcsvm(d, {}), DataError);
}

TEST(Mcsvm, Unanimous) {
    auto m = identity_model({0, 1, 2});
    m.models[0].bias = 0.4;  // 0 over 1
    m.models[1].bias = 0.2;  // 0 over 2
    m.models[2].bias = -0.3; // 2 over 1
    auto p = predict_detailed(m, FeatureRow{0.0});
    EXPECT_EQ(p.label, 0);
    EXPECT_EQ(p.votes, (std::vector<int>{2, 0, 1}));
}

TEST(Mcsvm, CycleTieBreak) {
    auto m = identity_model({0, 1, 2});
    m.models[0].bias = 0.9;  // A beats B
    m.models[1].bias = -0.1; // C beats A
    m.models[2].bias = 0.5;  // B beats C
    auto p = predict_detailed(m, FeatureRow{0.0});
    EXPECT_EQ(p.votes, (std::vector<int>{1, 1, 1}));
    EXPECT_EQ(p.label, 0);
    EXPECT_NEAR(p.margin[0], 0.9, 1e-15);

    m.models[0].bias = 0.5; // equal margins everywhere: smallest label
    m.models[1].bias = -0.5;
    EXPECT_EQ(predict(m, FeatureRow{0.0}), 0);
}

TEST(Mcsvm, TrainingRowDeepInsideMissing) {
    auto data = blobs(3, 15, 10.0, 1.0, 6);
    auto m = train_mcsvm(data, {3.0, 1.0});
    for (std::size_t i = 30; i < 45; ++i) EXPECT_EQ(class_name(predict(m, data.rows[i])), "Missing");
}

TEST(Folds, TwentySevenRowsFiveFolds) {
    std::vector<int> labels;
    for (int c = 0; c < 3; ++c)
        for (int i = 0; i < 9; ++i) labels.push_back(c);
    for (std::uint64_t seed : {0ull, 1ull, 42ull}) {
        auto fold = assign_folds(labels, 5, seed);
        std::vector<std::size_t> sizes(5, 0);
        for (auto f : fold) sizes[f]++;
        std::sort(sizes.rbegin(), sizes.rend());
        EXPECT_EQ(sizes, (std::vector<std::size_t>{6, 6, 5, 5, 5}));
        for (int c = 0; c < 3; ++c) {
            std::vector<std::size_t> per(5, 0);
            for (std::size_t i = 0; i < labels.size(); ++i)
                if (labels[i] == c) per[fold[i]]++;
            std::sort(per.rbegin(), per.rend());
            EXPECT_EQ(per, (std::vector<std::size_t>{2, 2, 2, 2, 1}));
        }
        EXPECT_EQ(fold, assign_folds(labels, 5, seed));
    }
    EXPECT_NE(assign_folds(labels, 5, 1), assign_folds(labels, 5, 2));
}

TEST(Folds, Errors) {
    std::vector<int> labels{0, 0, 1, 1};
    EXPECT_THROW(assign_folds(labels, 5, 0), DataError);
    EXPECT_THROW(assign_folds(labels, 1, 0), DataError);
    std::vector<int> one(10, 0);
    EXPECT_THROW(assign_folds(one, 5, 0), DataError);
}

TEST(Confusion, TwentySixOfTwentySeven) {
    ConfusionMatrix m({0, 1, 2});
    for (int c = 0; c < 3; ++c)
        for (int i = 0; i < 9; ++i) m.add(c, c == 2 && i == 0 ? 1 : c);
    EXPECT_EQ(m.total(), 27u);
    EXPECT_EQ(m.correct(), 26u);
    EXPECT_EQ(m.accuracy(), 26.0 / 27.0);
    EXPECT_NEAR(m.accuracy(), 0.9630, 1e-4);
    EXPECT_THROW(m.add(3, 0), DataError);
}

TEST(CrossValidate, SeparableBlobs) {
    auto data = blobs(3, 20, 8.0, 1.0, 7);
    auto cv = cross_validate(data, 5, {3.0, 1.0}, 1);
    EXPECT_EQ(cv.accuracy, 1.0);
    EXPECT_EQ(cv.matrix.total(), 60u);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(cv.matrix.count(i, j), i == j ? 20u : 0u);
}

TEST(CrossValidate, ParallelMatchesSerial) {
    auto data = blobs(3, 12, 2.0, 1.5, 8, 3);
    CvOptions par;
    par.parallel = true;
    auto a = cross_validate(data, 5, {1.0, 1.0}, 9);
    auto b = cross_validate(data, 5, {1.0, 1.0}, 9, par);
    EXPECT_EQ(a.matrix, b.matrix);
    EXPECT_EQ(a.predictions, b.predictions);
}

TEST(CrossValidate, NoLeakage) {
    auto data = blobs(3, 10, 2.0, 1.0, 10, 3);
    CvOptions keep;
    keep.keep_models = true;
    auto before = cross_validate(data, 5, {1.5, 1.0}, 3, keep);
    auto changed = data;
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (before.fold_of[i] == 0) {
            for (auto& v : changed.rows[i]) v = v * 100 + 7;
        }
    }
    auto after = cross_validate(changed, 5, {1.5, 1.0}, 3, keep);
    const auto& m0 = before.fold_models[0];
    const auto& m1 = after.fold_models[0];
    EXPECT_EQ(m0.standardizer.mean, m1.standardizer.mean);
    EXPECT_EQ(m0.standardizer.std_dev, m1.standardizer.std_dev);
    for (std::size_t p = 0; p < m0.models.size(); ++p) {
        EXPECT_EQ(m0.models[p].support_vectors, m1.models[p].support_vectors);
        EXPECT_EQ(m0.models[p].dual_weights, m1.models[p].dual_weights);
    }
}

TEST(CrossValidate, GlobalScaleInvariance) {
    auto data = blobs(3, 10, 2.0, 1.0, 11, 3);
    auto scaled = data;
    for (auto& r : scaled.rows)
        for (auto& v : r) v *= 8.0; // power of two keeps standardized rows bit-identical
    auto a = cross_validate(data, 5, {1.0, 1.0}, 4);
    auto b = cross_validate(scaled, 5, {1.0, 1.0}, 4);
    EXPECT_EQ(a.predictions, b.predictions);

    for (auto& r : scaled.rows)
        for (auto& v : r) v *= 3.7 / 8.0;
    EXPECT_EQ(a.predictions, cross_validate(scaled, 5, {1.0, 1.0}, 4).predictions);
}

TEST(ScaleSearch, TiesGoToSmallestScale) {
    auto data = blobs(3, 10, 20.0, 0.5, 12);
    auto s = optimize_kernel_scale(data, 5, 1);
    for (const auto& t : s.trace) EXPECT_EQ(t.accuracy, 1.0);
    EXPECT_EQ(s.best.scale, s.median_distance * kScaleMultipliers.front());
    EXPECT_EQ(s.trace.size(), kScaleMultipliers.size());
}

TEST(ScaleSearch, HeuristicRegionWins) {
    auto data = blobs(3, 20, 1.6, 1.0, 13, 3);
    auto s = optimize_kernel_scale(data, 5, 2);
    const double ratio = s.best.scale / s.median_distance;
    EXPECT_GE(ratio, 0.5);
    EXPECT_LE(ratio, 2.0);
}

TEST(ScaleSearch, TooFewRows) {
    auto data = blobs(3, 2, 5.0, 1.0, 14);
    EXPECT_THROW(optimize_kernel_scale(data, 5, 0), DataError);
}

TEST(ModelIo, RoundTrip) {
    auto data = blobs(3, 10, 4.0, 1.0, 15, 3);
    ModelFile file{train_mcsvm(data, {2.0, 0.5}), OperatorKind::Ceeo, FeatureSet::TimeOnly};
    auto doc = to_json(file);
    EXPECT_EQ(doc["version"], std::string(kModelVersion));
    auto back = model_from_json(nlohmann::json::parse(doc.dump()));
    EXPECT_EQ(back.preprocess, OperatorKind::Ceeo);
    EXPECT_EQ(back.feature_set, FeatureSet::TimeOnly);
    EXPECT_EQ(back.model.classes, file.model.classes);
    for (const auto& row : data.rows) {
        auto p = predict_detailed(file.model, row);
        auto q = predict_detailed(back.model, row);
        EXPECT_EQ(p.label, q.label);
        EXPECT_EQ(p.margin, q.margin);
    }
}

TEST(ModelIo, RejectsUnknownVersion) {
    auto data = blobs(2, 5, 4.0, 1.0, 16);
    auto doc = to_json(ModelFile{train_mcsvm(data, {}), OperatorKind::Ceeo, FeatureSet::Combined});
    doc["version"] = "gearcheck-model-v0";
    EXPECT_THROW(model_from_json(doc), DataError);
    doc.erase("version");
    EXPECT_THROW(model_from_json(doc), DataError);
    EXPECT_THROW(model_from_json(nlohmann::json{{"version", kModelVersion}}), DataError);
}
