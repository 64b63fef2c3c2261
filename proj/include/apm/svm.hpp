#pragma once

#include <cstddef>
#include <vector>

namespace apm {

// Dense row-major matrix of doubles.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double* row(std::size_t i) { return data.data() + i * cols; }
    const double* row(std::size_t i) const { return data.data() + i * cols; }
    double& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

// Per-dimension standardization fit on training data. Constant dimensions
// keep scale 1 so they center to zero.
struct Scaler {
    std::vector<double> mean;
    std::vector<double> inv_std;

    static Scaler fit(const Matrix& x);
    Matrix transform(const Matrix& x) const;
};

// One soft-margin binary problem of the one-vs-one scheme. The decision
// value w.x + bias is positive for class_pos.
struct PairwiseModel {
    int class_pos = 0;
    int class_neg = 0;
    std::vector<double> weights;
    double bias = 0.0;
};

struct SvmModel {
    Scaler scaler;
    std::vector<int> classes;  // ascending
    std::vector<PairwiseModel> pairwise;  // C(C-1)/2 models
};

struct SvmTrainOptions {
    double tolerance = 1e-6;
    std::size_t max_iterations = 100000;  // outer passes per pairwise problem
};

/*
 * One-vs-one linear SVM: fits the scaler on the training matrix,
 * standardizes, then solves one hinge-loss, L2-regularized binary problem
 * per class pair with a deterministic dual coordinate descent. Throws
 * std::invalid_argument on single-class input or non-finite features.
 */
SvmModel train_svm(const Matrix& features, const std::vector<int>& labels, double c,
                   const SvmTrainOptions& options = {});

// Majority vote over the pairwise models; ties break to the lowest class id.
// Throws std::invalid_argument on a feature-dimension mismatch.
std::vector<int> predict(const SvmModel& model, const Matrix& features);

}  // namespace apm
