#include "apm/cross_validation.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace apm {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    std::uint64_t h = a * 0x9e3779b97f4a7c15ULL + b;
    h ^= h >> 30;
    h *= 0xbf58476d1ce4e5b9ULL;
    h ^= h >> 27;
    return h;
}

Matrix gather_rows(const Matrix& x, const std::vector<std::size_t>& rows) {
    Matrix out(rows.size(), x.cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        std::copy(x.row(rows[i]), x.row(rows[i]) + x.cols, out.row(i));
    }
    return out;
}

double prediction_accuracy(const std::vector<int>& predicted, const std::vector<int>& truth) {
    std::size_t correct = 0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        if (predicted[i] == truth[i]) ++correct;
    }
    return predicted.empty() ? 0.0 : static_cast<double>(correct) / predicted.size();
}

}  // namespace

void CvConfig::check() const {
    if (outer_folds < 2) throw std::invalid_argument("CvConfig: outer_folds must be >= 2");
    if (inner_folds < 2) throw std::invalid_argument("CvConfig: inner_folds must be >= 2");
    if (repeats < 1) throw std::invalid_argument("CvConfig: repeats must be >= 1");
    if (layers < 1) throw std::invalid_argument("CvConfig: layers must be >= 1");
    if (dim < 1) throw std::invalid_argument("CvConfig: dim must be >= 1");
    if (c_grid.empty()) throw std::invalid_argument("CvConfig: empty C grid");
    for (double c : c_grid) {
        if (!(c > 0.0)) throw std::invalid_argument("CvConfig: C values must be positive");
    }
    if (threads < 1) throw std::invalid_argument("CvConfig: threads must be >= 1");
}

std::vector<std::size_t> stratified_fold_assignment(const std::vector<int>& labels,
                                                    std::size_t folds, std::mt19937_64& rng) {
    std::map<int, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);

    std::vector<std::size_t> fold_of(labels.size(), 0);
    std::size_t offset = 0;  // rotates so small classes do not pile into fold 0
    for (auto& [cls, indices] : by_class) {
        (void)cls;
        std::shuffle(indices.begin(), indices.end(), rng);
        for (std::size_t i = 0; i < indices.size(); ++i) {
            fold_of[indices[i]] = (offset + i) % folds;
        }
        offset = (offset + indices.size()) % folds;
    }
    return fold_of;
}

std::pair<double, double> accuracy_mean_std(const std::vector<FoldResult>& folds) {
    if (folds.empty()) return {0.0, 0.0};
    double mean = 0.0;
    for (const FoldResult& f : folds) mean += f.accuracy;
    mean /= static_cast<double>(folds.size());
    double var = 0.0;
    for (const FoldResult& f : folds) {
        const double d = f.accuracy - mean;
        var += d * d;
    }
    return {mean, std::sqrt(var / static_cast<double>(folds.size()))};
}

std::string CvReport::table_cell() const {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.2f±%.2f", mean_accuracy * 100.0,
                  std_accuracy * 100.0);
    return buf;
}

CvReport nested_cv(const TUDataset& ds, const CvConfig& config) {
    config.check();
    if (ds.graphs.empty()) throw std::invalid_argument("nested_cv: empty dataset");

    // Fold assignments are drawn sequentially so they never depend on the
    // thread schedule.
    std::vector<std::vector<std::size_t>> fold_of_repeat(config.repeats);
    for (std::size_t rep = 0; rep < config.repeats; ++rep) {
        std::mt19937_64 rng(mix_seed(config.seed, rep));
        fold_of_repeat[rep] = stratified_fold_assignment(ds.class_labels, config.outer_folds, rng);
    }

    const std::size_t total_tasks = config.repeats * config.outer_folds;
    std::vector<FoldResult> results(total_tasks);
    std::mutex timing_mutex;
    PhaseTimings timings;
    const auto run_start = Clock::now();

    auto run_fold = [&](std::size_t rep, std::size_t fold) {
        const std::vector<std::size_t>& fold_of = fold_of_repeat[rep];

        std::vector<std::size_t> train_idx, test_idx;
        for (std::size_t i = 0; i < ds.graphs.size(); ++i) {
            (fold_of[i] == fold ? test_idx : train_idx).push_back(i);
        }

        std::vector<LabeledGraph> train_graphs, test_graphs;
        std::vector<int> train_labels, test_labels;
        train_graphs.reserve(train_idx.size());
        for (std::size_t i : train_idx) {
            train_graphs.push_back(ds.graphs[i]);
            train_labels.push_back(ds.class_labels[i]);
        }
        for (std::size_t i : test_idx) {
            test_graphs.push_back(ds.graphs[i]);
            test_labels.push_back(ds.class_labels[i]);
        }

        const auto pipeline_start = Clock::now();
        const FittedPipeline pipeline =
            fit_pipeline(train_graphs, train_labels, config.layers, config.dim, config.selection);
        const Matrix x_train = feature_matrix(pipeline, train_graphs);
        const Matrix x_test = feature_matrix(pipeline, test_graphs);
        const double pipeline_s = seconds_since(pipeline_start);

        // Inner split is fixed before the grid loop so every C sees the
        // same folds.
        const auto selection_start = Clock::now();
        std::mt19937_64 inner_rng(mix_seed(mix_seed(config.seed, rep), 0x10000 + fold));
        const std::vector<std::size_t> inner_fold_of =
            stratified_fold_assignment(train_labels, config.inner_folds, inner_rng);

        struct InnerFold {
            std::vector<std::size_t> train_rows, val_rows;
            std::vector<int> train_labels, val_labels;
        };
        std::vector<InnerFold> usable;
        for (std::size_t f = 0; f < config.inner_folds; ++f) {
            InnerFold inner;
            for (std::size_t i = 0; i < train_labels.size(); ++i) {
                if (inner_fold_of[i] == f) {
                    inner.val_rows.push_back(i);
                    inner.val_labels.push_back(train_labels[i]);
                } else {
                    inner.train_rows.push_back(i);
                    inner.train_labels.push_back(train_labels[i]);
                }
            }
            if (inner.val_rows.empty()) continue;
            const auto [lo, hi] =
                std::minmax_element(inner.train_labels.begin(), inner.train_labels.end());
            if (*lo == *hi) continue;  // single-class inner training set
            usable.push_back(std::move(inner));
        }

        double chosen_c = config.c_grid.front();
        if (!usable.empty()) {
            double best_acc = -1.0;
            for (double c : config.c_grid) {
                double acc_sum = 0.0;
                for (const InnerFold& inner : usable) {
                    const SvmModel model =
                        train_svm(gather_rows(x_train, inner.train_rows), inner.train_labels, c);
                    const std::vector<int> pred =
                        predict(model, gather_rows(x_train, inner.val_rows));
                    acc_sum += prediction_accuracy(pred, inner.val_labels);
                }
                const double acc = acc_sum / static_cast<double>(usable.size());
                if (acc > best_acc) {  // ties keep the smaller C
                    best_acc = acc;
                    chosen_c = c;
                }
            }
        }
        const double selection_s = seconds_since(selection_start);

        const auto eval_start = Clock::now();
        const SvmModel model = train_svm(x_train, train_labels, chosen_c);
        const std::vector<int> predictions = predict(model, x_test);
        const double eval_s = seconds_since(eval_start);

        FoldResult r;
        r.repeat = rep;
        r.fold = fold;
        r.accuracy = prediction_accuracy(predictions, test_labels);
        r.chosen_c = chosen_c;
        r.d_effective = pipeline.effective_dim();
        r.vocab_size = pipeline.vocab_size;
        r.test_size = test_idx.size();
        results[rep * config.outer_folds + fold] = r;

        std::lock_guard<std::mutex> lock(timing_mutex);
        timings.pipeline_seconds += pipeline_s;
        timings.model_selection_seconds += selection_s;
        timings.evaluation_seconds += eval_s;
    };

    if (config.threads <= 1) {
        for (std::size_t t = 0; t < total_tasks; ++t) {
            run_fold(t / config.outer_folds, t % config.outer_folds);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        std::vector<std::thread> workers;
        const std::size_t worker_count = std::min(config.threads, total_tasks);
        workers.reserve(worker_count);
        for (std::size_t w = 0; w < worker_count; ++w) {
            workers.emplace_back([&] {
                try {
                    for (std::size_t t = next.fetch_add(1); t < total_tasks;
                         t = next.fetch_add(1)) {
                        run_fold(t / config.outer_folds, t % config.outer_folds);
                    }
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    next.store(total_tasks);  // stop handing out work
                }
            });
        }
        for (std::thread& worker : workers) worker.join();
        if (failure) std::rethrow_exception(failure);
    }

    CvReport report;
    report.dataset_name = ds.name;
    report.folds = std::move(results);
    std::tie(report.mean_accuracy, report.std_accuracy) = accuracy_mean_std(report.folds);
    timings.total_seconds = seconds_since(run_start);
    report.timings = timings;
    return report;
}

}  // namespace apm
