#include "apm/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <stdexcept>

namespace apm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/*
 * Dual coordinate descent for the hinge-loss (L1) soft-margin linear SVM:
 *
 *   min_alpha 0.5 alpha^T Q alpha - e^T alpha,  0 <= alpha_i <= C,
 *   Q_ij = y_i y_j x_i . x_j
 *
 * with projected-gradient stopping and liblinear-style shrinking. Rows are
 * expected to already carry the bias feature. The permutation RNG is seeded
 * by the caller, so the solve is deterministic.
 */
std::vector<double> solve_hinge_dual(const Matrix& x, const std::vector<signed char>& y,
                                     double c, double tolerance, std::size_t max_iterations,
                                     std::uint64_t seed) {
    const std::size_t n = x.rows;
    const std::size_t dims = x.cols;

    std::vector<double> w(dims, 0.0);
    std::vector<double> alpha(n, 0.0);
    std::vector<double> q_diag(n, 0.0);
    std::vector<std::size_t> index(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double* xi = x.row(i);
        double norm2 = 0.0;
        for (std::size_t j = 0; j < dims; ++j) norm2 += xi[j] * xi[j];
        q_diag[i] = norm2;
        index[i] = i;
    }

    std::mt19937_64 rng(seed);
    std::size_t active = n;
    double pg_max_old = kInf;
    double pg_min_old = -kInf;

    for (std::size_t iter = 0; iter < max_iterations; ++iter) {
        double pg_max = -kInf;
        double pg_min = kInf;

        for (std::size_t i = 0; i < active; ++i) {
            std::uniform_int_distribution<std::size_t> pick(i, active - 1);
            std::swap(index[i], index[pick(rng)]);
        }

        for (std::size_t s = 0; s < active; ++s) {
            const std::size_t i = index[s];
            const double* xi = x.row(i);
            const double yi = y[i];

            double g = 0.0;
            for (std::size_t j = 0; j < dims; ++j) g += w[j] * xi[j];
            g = g * yi - 1.0;

            double pg = 0.0;
            if (alpha[i] == 0.0) {
                if (g > pg_max_old) {
                    --active;
                    std::swap(index[s], index[active]);
                    --s;
                    continue;
                }
                if (g < 0.0) pg = g;
            } else if (alpha[i] == c) {
                if (g < pg_min_old) {
                    --active;
                    std::swap(index[s], index[active]);
                    --s;
                    continue;
                }
                if (g > 0.0) pg = g;
            } else {
                pg = g;
            }

            pg_max = std::max(pg_max, pg);
            pg_min = std::min(pg_min, pg);

            if (std::fabs(pg) > 1e-12 && q_diag[i] > 0.0) {
                const double old_alpha = alpha[i];
                alpha[i] = std::min(std::max(old_alpha - g / q_diag[i], 0.0), c);
                const double delta = (alpha[i] - old_alpha) * yi;
                for (std::size_t j = 0; j < dims; ++j) w[j] += delta * xi[j];
            }
        }

        if (pg_max - pg_min <= tolerance && std::fabs(pg_max) <= tolerance &&
            std::fabs(pg_min) <= tolerance) {
            if (active == n) break;
            // restart on the full set to confirm convergence
            active = n;
            pg_max_old = kInf;
            pg_min_old = -kInf;
            continue;
        }
        pg_max_old = pg_max <= 0.0 ? kInf : pg_max;
        pg_min_old = pg_min >= 0.0 ? -kInf : pg_min;
    }
    return w;
}

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    std::uint64_t h = a * 0x9e3779b97f4a7c15ULL + b;
    h ^= h >> 30;
    h *= 0xbf58476d1ce4e5b9ULL;
    h ^= h >> 27;
    return h;
}

}  // namespace

Scaler Scaler::fit(const Matrix& x) {
    Scaler s;
    s.mean.assign(x.cols, 0.0);
    s.inv_std.assign(x.cols, 1.0);
    if (x.rows == 0) return s;
    for (std::size_t i = 0; i < x.rows; ++i) {
        const double* row = x.row(i);
        for (std::size_t j = 0; j < x.cols; ++j) s.mean[j] += row[j];
    }
    for (double& m : s.mean) m /= static_cast<double>(x.rows);
    std::vector<double> var(x.cols, 0.0);
    for (std::size_t i = 0; i < x.rows; ++i) {
        const double* row = x.row(i);
        for (std::size_t j = 0; j < x.cols; ++j) {
            const double d = row[j] - s.mean[j];
            var[j] += d * d;
        }
    }
    for (std::size_t j = 0; j < x.cols; ++j) {
        const double sd = std::sqrt(var[j] / static_cast<double>(x.rows));
        s.inv_std[j] = sd > 0.0 ? 1.0 / sd : 1.0;
    }
    return s;
}

Matrix Scaler::transform(const Matrix& x) const {
    Matrix out(x.rows, x.cols);
    for (std::size_t i = 0; i < x.rows; ++i) {
        const double* src = x.row(i);
        double* dst = out.row(i);
        for (std::size_t j = 0; j < x.cols; ++j) {
            dst[j] = (src[j] - mean[j]) * inv_std[j];
        }
    }
    return out;
}

SvmModel train_svm(const Matrix& features, const std::vector<int>& labels, double c,
                   const SvmTrainOptions& options) {
    if (features.rows != labels.size()) {
        throw std::invalid_argument("train_svm: feature rows and labels misaligned");
    }
    if (c <= 0.0) throw std::invalid_argument("train_svm: C must be positive");
    for (double v : features.data) {
        if (!std::isfinite(v)) throw std::invalid_argument("train_svm: non-finite feature");
    }

    SvmModel model;
    {
        std::set<int> distinct(labels.begin(), labels.end());
        model.classes.assign(distinct.begin(), distinct.end());
    }
    if (model.classes.size() < 2) {
        throw std::invalid_argument("train_svm: need at least two classes");
    }

    model.scaler = Scaler::fit(features);
    const Matrix scaled = model.scaler.transform(features);

    for (std::size_t a = 0; a < model.classes.size(); ++a) {
        for (std::size_t b = a + 1; b < model.classes.size(); ++b) {
            const int class_pos = model.classes[a];
            const int class_neg = model.classes[b];

            std::vector<std::size_t> rows;
            for (std::size_t i = 0; i < labels.size(); ++i) {
                if (labels[i] == class_pos || labels[i] == class_neg) rows.push_back(i);
            }

            // bias handled as a constant appended feature
            Matrix sub(rows.size(), scaled.cols + 1);
            std::vector<signed char> y(rows.size());
            for (std::size_t r = 0; r < rows.size(); ++r) {
                const double* src = scaled.row(rows[r]);
                double* dst = sub.row(r);
                std::copy(src, src + scaled.cols, dst);
                dst[scaled.cols] = 1.0;
                y[r] = labels[rows[r]] == class_pos ? 1 : -1;
            }

            const std::uint64_t seed = mix_seed(0x5b5ad211u, mix_seed(a, b));
            std::vector<double> w = solve_hinge_dual(sub, y, c, options.tolerance,
                                                     options.max_iterations, seed);
            PairwiseModel pm;
            pm.class_pos = class_pos;
            pm.class_neg = class_neg;
            pm.bias = w.back();
            w.pop_back();
            pm.weights = std::move(w);
            model.pairwise.push_back(std::move(pm));
        }
    }
    return model;
}

std::vector<int> predict(const SvmModel& model, const Matrix& features) {
    if (features.cols != model.scaler.mean.size()) {
        throw std::invalid_argument("predict: feature dimension " +
                                    std::to_string(features.cols) + " does not match model " +
                                    std::to_string(model.scaler.mean.size()));
    }
    const Matrix scaled = model.scaler.transform(features);

    std::vector<int> out(features.rows);
    std::vector<std::size_t> votes(model.classes.size());
    for (std::size_t i = 0; i < scaled.rows; ++i) {
        std::fill(votes.begin(), votes.end(), 0);
        const double* xi = scaled.row(i);
        for (const PairwiseModel& pm : model.pairwise) {
            double decision = pm.bias;
            for (std::size_t j = 0; j < pm.weights.size(); ++j) decision += pm.weights[j] * xi[j];
            const int winner = decision > 0.0 ? pm.class_pos : pm.class_neg;
            const std::size_t row =
                std::lower_bound(model.classes.begin(), model.classes.end(), winner) -
                model.classes.begin();
            ++votes[row];
        }
        // majority vote, ties to the lowest class id (classes are ascending)
        std::size_t best = 0;
        for (std::size_t k = 1; k < votes.size(); ++k) {
            if (votes[k] > votes[best]) best = k;
        }
        out[i] = model.classes[best];
    }
    return out;
}

}  // namespace apm
