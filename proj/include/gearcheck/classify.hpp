#pragma once

#include "gearcheck/features.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace gearcheck {

using FeatureRow = std::vector<double>;

// Dense rows with integer class labels. Labels from a FeatureTable are the
// HealthClass ordinals; other callers may use any non-negative integers.
struct Dataset {
    std::vector<FeatureRow> rows;
    std::vector<int> labels;

    std::size_t size() const { return rows.size(); }
    std::size_t dims() const { return rows.empty() ? 0 : rows.front().size(); }
};

// Requires every row to be labeled.
Dataset to_dataset(const FeatureTable& table);
Dataset subset(const Dataset& data, std::span<const std::size_t> indices);

// HealthClass name for labels 0..2, "class<N>" otherwise.
std::string class_name(int label);

// Gaussian kernel exp(-|u-v|^2 / (2 scale^2)) with box constraint c_penalty.
struct KernelConfig {
    double scale = 1.0;
    double c_penalty = 1.0;

    void validate() const;
    double operator()(std::span<const double> u, std::span<const double> v) const;
};

// Per-feature z-scoring fitted on training rows (population std). Features
// that are constant on the training rows are dropped.
struct Standardizer {
    std::size_t input_dims = 0;
    std::vector<std::size_t> retained;
    std::vector<double> mean;    // parallel to retained
    std::vector<double> std_dev; // parallel to retained, all > 0
    std::vector<std::size_t> dropped;

    FeatureRow transform(std::span<const double> row) const;
    std::vector<FeatureRow> transform(const std::vector<FeatureRow>& rows) const;
};

Standardizer fit_standardizer(const std::vector<FeatureRow>& rows);

struct SolverOptions {
    double tolerance = 1e-3; // maximal KKT violation pair gap
    std::size_t max_passes = 10'000; // a pass is one update per training row
};

struct BinarySvmModel {
    std::pair<int, int> class_pair{+1, -1}; // (positive, negative)
    std::vector<FeatureRow> support_vectors;
    std::vector<double> dual_weights; // alpha_i * y_i
    double bias = 0.0;
    KernelConfig kernel;
    std::vector<std::size_t> support_indices; // into the training rows
    std::size_t iterations = 0;

    double decision(std::span<const double> x) const;
};

inline constexpr double kSupportThreshold = 1e-8;

// Soft-margin C-SVM dual solved by SMO with second-order working-set
// selection. Labels must be +1/-1. Throws DataError for a single-class
// problem and NumericalError when the pass budget runs out.
BinarySvmModel train_binary_svm(const std::vector<FeatureRow>& rows, std::span<const int> labels,
                                const KernelConfig& kernel, const SolverOptions& options = {});

// Largest violation of the soft-margin KKT conditions of `model` on its own
// training data.
double kkt_residual(const BinarySvmModel& model, const std::vector<FeatureRow>& rows,
                    std::span<const int> labels);

struct McsvmModel {
    std::vector<int> classes; // sorted
    std::vector<BinarySvmModel> models; // one per unordered pair, lexicographic
    Standardizer standardizer;
    KernelConfig kernel;

    std::size_t input_dims() const { return standardizer.input_dims; }
};

McsvmModel train_mcsvm(const Dataset& data, const KernelConfig& kernel,
                       const SolverOptions& options = {}, bool parallel = false);

struct Prediction {
    int label = 0;
    std::vector<int> votes;     // parallel to model.classes
    std::vector<double> margin; // summed |decision| over the pairs each class won
};

// One-vs-one voting. Ties go to the largest summed winning margin, then to
// the smallest label.
Prediction predict_detailed(const McsvmModel& model, std::span<const double> x);
int predict(const McsvmModel& model, std::span<const double> x);

class ConfusionMatrix {
public:
    explicit ConfusionMatrix(std::vector<int> classes);

    void add(int truth, int predicted);

    const std::vector<int>& classes() const { return classes_; }
    std::size_t count(std::size_t truth_index, std::size_t predicted_index) const {
        return counts_[truth_index][predicted_index];
    }
    const std::vector<std::vector<std::size_t>>& counts() const { return counts_; }
    std::size_t total() const;
    std::size_t correct() const;
    double accuracy() const;

    bool operator==(const ConfusionMatrix&) const = default;

private:
    std::size_t index_of(int label) const;

    std::vector<int> classes_;
    std::vector<std::vector<std::size_t>> counts_;
};

// Stratified fold assignment: each class is shuffled with its own derived
// seed, then rows are dealt round-robin with one counter that carries over
// from class to class, so fold sizes differ by at most one. Throws when any
// class has fewer than k rows.
std::vector<std::size_t> assign_folds(std::span<const int> labels, std::size_t k,
                                      std::uint64_t seed);

struct CvOptions {
    bool parallel = false;
    bool keep_models = false;
    SolverOptions solver;
};

struct CvResult {
    ConfusionMatrix matrix{{}};
    double accuracy = 0.0;
    std::vector<std::size_t> fold_of;   // per row
    std::vector<int> predictions;       // per row
    std::vector<McsvmModel> fold_models; // filled when keep_models is set
};

CvResult cross_validate(const Dataset& data, std::size_t k, const KernelConfig& kernel,
                        std::uint64_t seed, const CvOptions& options = {});

struct ScaleTrial {
    double multiplier = 0.0;
    double scale = 0.0;
    double accuracy = 0.0;
};

struct ScaleSearch {
    KernelConfig best;
    double median_distance = 0.0;
    std::vector<ScaleTrial> trace;
};

inline constexpr std::array<double, 7> kScaleMultipliers = {0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0};

// Grid search over median-distance multiples; ties go to the smallest scale.
ScaleSearch optimize_kernel_scale(const Dataset& data, std::size_t k, std::uint64_t seed,
                                  double c_penalty = 1.0, const CvOptions& options = {});

// Median pairwise Euclidean distance between rows after standardizing on
// all of them.
double median_pairwise_distance(const Dataset& data);

} // namespace gearcheck
