#include "gearcheck/classify.hpp"

#include "gearcheck/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gearcheck {
namespace {

constexpr double kTau = 1e-12; // floor for non-positive curvature

bool same_dims(const std::vector<FeatureRow>& rows) {
    return std::all_of(rows.begin(), rows.end(),
                       [&](const FeatureRow& r) { return r.size() == rows.front().size(); });
}

} // namespace

Dataset to_dataset(const FeatureTable& table) {
    Dataset out;
    out.rows.reserve(table.rows.size());
    out.labels.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        if (!row.label) {
            throw DataError("feature row '" + row.source + "' has no label");
        }
        out.rows.push_back(row.dense());
        out.labels.push_back(static_cast<int>(*row.label));
    }
    if (!out.rows.empty() && !same_dims(out.rows)) {
        throw DataError("feature rows have inconsistent arity");
    }
    return out;
}

Dataset subset(const Dataset& data, std::span<const std::size_t> indices) {
    Dataset out;
    out.rows.reserve(indices.size());
    out.labels.reserve(indices.size());
    for (auto i : indices) {
        out.rows.push_back(data.rows.at(i));
        out.labels.push_back(data.labels.at(i));
    }
    return out;
}

std::string class_name(int label) {
    if (label >= 0 && label < static_cast<int>(kHealthClassCount)) {
        return std::string(to_string(static_cast<HealthClass>(label)));
    }
    return "class" + std::to_string(label);
}

void KernelConfig::validate() const {
    if (!(scale > 0.0) || !std::isfinite(scale)) {
        throw DataError("kernel scale must be positive");
    }
    if (!(c_penalty > 0.0) || !std::isfinite(c_penalty)) {
        throw DataError("box constraint C must be positive");
    }
}

double KernelConfig::operator()(std::span<const double> u, std::span<const double> v) const {
    double d2 = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double d = u[i] - v[i];
        d2 += d * d;
    }
    return std::exp(-d2 / (2.0 * scale * scale));
}

Standardizer fit_standardizer(const std::vector<FeatureRow>& rows) {
    if (rows.size() < 2) {
        throw DataError("standardizer needs at least two rows");
    }
    if (!same_dims(rows)) {
        throw DataError("standardizer rows have inconsistent arity");
    }
    Standardizer s;
    s.input_dims = rows.front().size();
    const double n = static_cast<double>(rows.size());
    for (std::size_t j = 0; j < s.input_dims; ++j) {
        double sum = 0.0;
        for (const auto& r : rows) {
            sum += r[j];
        }
        const double mean = sum / n;
        double ss = 0.0;
        for (const auto& r : rows) {
            const double d = r[j] - mean;
            ss += d * d;
        }
        const double sd = std::sqrt(ss / n);
        // Rounding in the mean leaves ~eps*|mean| residual spread on a
        // constant column.
        if (sd <= 1e-12 * std::max(1.0, std::abs(mean))) {
            s.dropped.push_back(j);
            continue;
        }
        s.retained.push_back(j);
        s.mean.push_back(mean);
        s.std_dev.push_back(sd);
    }
    return s;
}

FeatureRow Standardizer::transform(std::span<const double> row) const {
    if (row.size() != input_dims) {
        throw DataError("feature arity mismatch: model expects " + std::to_string(input_dims) +
                        " features, got " + std::to_string(row.size()));
    }
    FeatureRow out(retained.size());
    for (std::size_t i = 0; i < retained.size(); ++i) {
        out[i] = (row[retained[i]] - mean[i]) / std_dev[i];
    }
    return out;
}

std::vector<FeatureRow> Standardizer::transform(const std::vector<FeatureRow>& rows) const {
    std::vector<FeatureRow> out;
    out.reserve(rows.size());
    for (const auto& r : rows) {
        out.push_back(transform(r));
    }
    return out;
}

double BinarySvmModel::decision(std::span<const double> x) const {
    double f = bias;
    for (std::size_t i = 0; i < support_vectors.size(); ++i) {
        f += dual_weights[i] * kernel(support_vectors[i], x);
    }
    return f;
}

BinarySvmModel train_binary_svm(const std::vector<FeatureRow>& rows, std::span<const int> labels,
                                const KernelConfig& kernel, const SolverOptions& options) {
    kernel.validate();
    const std::size_t n = rows.size();
    if (labels.size() != n) {
        throw DataError("row and label counts differ");
    }
    if (n == 0 || !same_dims(rows)) {
        throw DataError("binary SVM needs non-empty rows of equal arity");
    }
    bool has_pos = false;
    bool has_neg = false;
    for (int y : labels) {
        if (y != 1 && y != -1) {
            throw DataError("binary SVM labels must be +1 or -1");
        }
        has_pos = has_pos || y == 1;
        has_neg = has_neg || y == -1;
    }
    if (!has_pos || !has_neg) {
        throw DataError("degenerate binary problem: only one class present");
    }

    const double c = kernel.c_penalty;
    std::vector<double> k_matrix(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            const double v = kernel(rows[i], rows[j]);
            k_matrix[i * n + j] = v;
            k_matrix[j * n + i] = v;
        }
    }
    const auto kij = [&](std::size_t i, std::size_t j) { return k_matrix[i * n + j]; };
    const auto y = [&](std::size_t i) { return static_cast<double>(labels[i]); };

    // Dual: min 1/2 a'Qa - e'a, 0 <= a <= C, y'a = 0, Q_ij = y_i y_j K_ij.
    // grad holds Qa - e.
    std::vector<double> alpha(n, 0.0);
    std::vector<double> grad(n, -1.0);
    const auto in_up = [&](std::size_t t) {
        return (labels[t] == 1 && alpha[t] < c) || (labels[t] == -1 && alpha[t] > 0.0);
    };
    const auto in_low = [&](std::size_t t) {
        return (labels[t] == 1 && alpha[t] > 0.0) || (labels[t] == -1 && alpha[t] < c);
    };

    const std::size_t max_iterations = options.max_passes * std::max<std::size_t>(n, 1);
    std::size_t iter = 0;
    for (;; ++iter) {
        // Working set: i maximises -y G over I_up; j minimises the
        // second-order objective decrease over I_low.
        double g_max = -std::numeric_limits<double>::infinity();
        std::size_t i = n;
        for (std::size_t t = 0; t < n; ++t) {
            if (in_up(t) && -y(t) * grad[t] >= g_max) {
                g_max = -y(t) * grad[t];
                i = t;
            }
        }
        double g_max2 = -std::numeric_limits<double>::infinity();
        std::size_t j = n;
        double best_obj = std::numeric_limits<double>::infinity();
        for (std::size_t t = 0; t < n; ++t) {
            if (!in_low(t)) {
                continue;
            }
            const double yg = y(t) * grad[t];
            g_max2 = std::max(g_max2, yg);
            if (i == n) {
                continue;
            }
            const double grad_diff = g_max + yg;
            if (grad_diff > 0.0) {
                double quad = kij(i, i) + kij(t, t) - 2.0 * kij(i, t);
                if (quad <= 0.0) {
                    quad = kTau;
                }
                const double obj = -(grad_diff * grad_diff) / quad;
                if (obj <= best_obj) {
                    best_obj = obj;
                    j = t;
                }
            }
        }
        if (i == n || j == n || g_max + g_max2 < options.tolerance) {
            break;
        }
        if (iter >= max_iterations) {
            throw NumericalError("SMO did not converge after " + std::to_string(iter) +
                                 " iterations (KKT gap " + std::to_string(g_max + g_max2) + ")");
        }

        const double old_ai = alpha[i];
        const double old_aj = alpha[j];
        if (labels[i] != labels[j]) {
            double quad = kij(i, i) + kij(j, j) - 2.0 * kij(i, j);
            if (quad <= 0.0) {
                quad = kTau;
            }
            const double delta = (-grad[i] - grad[j]) / quad;
            const double diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if (diff > 0.0) {
                if (alpha[j] < 0.0) {
                    alpha[j] = 0.0;
                    alpha[i] = diff;
                }
            } else if (alpha[i] < 0.0) {
                alpha[i] = 0.0;
                alpha[j] = -diff;
            }
            if (diff > 0.0) {
                if (alpha[i] > c) {
                    alpha[i] = c;
                    alpha[j] = c - diff;
                }
            } else if (alpha[j] > c) {
                alpha[j] = c;
                alpha[i] = c + diff;
            }
        } else {
            double quad = kij(i, i) + kij(j, j) - 2.0 * kij(i, j);
            if (quad <= 0.0) {
                quad = kTau;
            }
            const double delta = (grad[i] - grad[j]) / quad;
            const double sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if (sum > c) {
                if (alpha[i] > c) {
                    alpha[i] = c;
                    alpha[j] = sum - c;
                }
            } else if (alpha[j] < 0.0) {
                alpha[j] = 0.0;
                alpha[i] = sum;
            }
            if (sum > c) {
                if (alpha[j] > c) {
                    alpha[j] = c;
                    alpha[i] = sum - c;
                }
            } else if (alpha[i] < 0.0) {
                alpha[i] = 0.0;
                alpha[j] = sum;
            }
        }

        const double dai = alpha[i] - old_ai;
        const double daj = alpha[j] - old_aj;
        for (std::size_t t = 0; t < n; ++t) {
            grad[t] += y(t) * (y(i) * kij(i, t) * dai + y(j) * kij(j, t) * daj);
        }
    }

    // rho: mean of y G over free vectors, else midpoint of the feasible range.
    double upper = std::numeric_limits<double>::infinity();
    double lower = -std::numeric_limits<double>::infinity();
    double free_sum = 0.0;
    std::size_t free_count = 0;
    for (std::size_t t = 0; t < n; ++t) {
        const double yg = y(t) * grad[t];
        if (alpha[t] >= c) {
            if (labels[t] == -1) {
                upper = std::min(upper, yg);
            } else {
                lower = std::max(lower, yg);
            }
        } else if (alpha[t] <= 0.0) {
            if (labels[t] == 1) {
                upper = std::min(upper, yg);
            } else {
                lower = std::max(lower, yg);
            }
        } else {
            free_sum += yg;
            ++free_count;
        }
    }
    const double rho = free_count > 0 ? free_sum / static_cast<double>(free_count)
                                      : 0.5 * (upper + lower);

    BinarySvmModel model;
    model.kernel = kernel;
    model.bias = -rho;
    model.iterations = iter;
    for (std::size_t t = 0; t < n; ++t) {
        if (alpha[t] > kSupportThreshold) {
            model.support_vectors.push_back(rows[t]);
            model.dual_weights.push_back(alpha[t] * y(t));
            model.support_indices.push_back(t);
        }
    }
    return model;
}

double kkt_residual(const BinarySvmModel& model, const std::vector<FeatureRow>& rows,
                    std::span<const int> labels) {
    std::vector<double> alpha(rows.size(), 0.0);
    for (std::size_t s = 0; s < model.support_indices.size(); ++s) {
        alpha.at(model.support_indices[s]) = std::abs(model.dual_weights[s]);
    }
    const double c = model.kernel.c_penalty;
    double worst = 0.0;
    for (std::size_t t = 0; t < rows.size(); ++t) {
        const double margin = labels[t] * model.decision(rows[t]) - 1.0;
        double violation = 0.0;
        if (alpha[t] <= kSupportThreshold) {
            violation = std::max(0.0, -margin);
        } else if (alpha[t] >= c * (1.0 - 1e-12)) {
            violation = std::max(0.0, margin);
        } else {
            violation = std::abs(margin);
        }
        worst = std::max(worst, violation);
    }
    return worst;
}

} // namespace gearcheck
