#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "apm/pipeline.hpp"
#include "apm/tu_dataset.hpp"

namespace apm {

struct CvConfig {
    std::size_t outer_folds = 10;
    std::size_t repeats = 10;
    std::size_t inner_folds = 10;
    std::vector<double> c_grid = {0.001, 0.01, 0.1, 1.0, 10.0, 100.0, 1000.0};
    std::size_t layers = 2;  // K
    std::size_t dim = 100;   // D
    std::uint64_t seed = 0;
    SelectionMode selection = SelectionMode::Loss;
    std::size_t threads = 1;

    // Throws std::invalid_argument on folds < 2, an empty grid, or
    // non-positive C values.
    void check() const;
};

struct FoldResult {
    std::size_t repeat = 0;
    std::size_t fold = 0;
    double accuracy = 0.0;
    double chosen_c = 0.0;
    std::size_t d_effective = 0;
    std::size_t vocab_size = 0;
    std::size_t test_size = 0;
};

// Accumulated across folds; pipeline covers transform + embedding +
// selection, model_selection the inner grid search, evaluation the final
// retrain + prediction.
struct PhaseTimings {
    double pipeline_seconds = 0.0;
    double model_selection_seconds = 0.0;
    double evaluation_seconds = 0.0;
    double total_seconds = 0.0;
};

struct CvReport {
    std::string dataset_name;
    std::vector<FoldResult> folds;  // ordered by (repeat, fold)
    double mean_accuracy = 0.0;     // over all fold accuracies
    double std_accuracy = 0.0;      // population standard deviation
    PhaseTimings timings;           // wall clock; reported via the manifest

    // Table cell format, accuracies in percent: "88.80±5.57".
    std::string table_cell() const;
};

// Deterministic stratified fold assignment: per class, indices are shuffled
// and dealt round-robin with a rotating offset. Returns fold id per sample.
std::vector<std::size_t> stratified_fold_assignment(const std::vector<int>& labels,
                                                    std::size_t folds, std::mt19937_64& rng);

/*
 * Repeated nested cross-validation. Per repeat: a seeded stratified split
 * into outer folds; per outer fold the pipeline (vocabulary, selection) is
 * fit on the training portion only, C is chosen by inner-fold grid search
 * on the training portion, the model is retrained on the full training
 * portion and scored on the held-out fold. Identical seed, config, and
 * dataset give a bit-identical report.
 */
CvReport nested_cv(const TUDataset& ds, const CvConfig& config);

// Mean and population standard deviation of the stored fold accuracies.
std::pair<double, double> accuracy_mean_std(const std::vector<FoldResult>& folds);

}  // namespace apm
