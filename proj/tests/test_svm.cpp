#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "doctest.h"

#include "apm/svm.hpp"

using namespace apm;

namespace {

// 1-D two-class toy set: 10 points at -1, 10 points at +1.
std::pair<Matrix, std::vector<int>> separable_toy() {
    Matrix x(20, 1);
    std::vector<int> y(20);
    for (std::size_t i = 0; i < 10; ++i) {
        x.at(i, 0) = -1.0 - 0.01 * static_cast<double>(i);
        y[i] = 0;
        x.at(10 + i, 0) = 1.0 + 0.01 * static_cast<double>(i);
        y[10 + i] = 1;
    }
    return {x, y};
}

double hinge_loss(const SvmModel& model, const Matrix& x, const std::vector<int>& y) {
    const Matrix scaled = model.scaler.transform(x);
    const PairwiseModel& pm = model.pairwise.front();
    double total = 0.0;
    for (std::size_t i = 0; i < scaled.rows; ++i) {
        double decision = pm.bias;
        for (std::size_t j = 0; j < scaled.cols; ++j) {
            decision += pm.weights[j] * scaled.at(i, j);
        }
        const double yi = y[i] == pm.class_pos ? 1.0 : -1.0;
        total += std::max(0.0, 1.0 - yi * decision);
    }
    return total;
}

}  // namespace

TEST_CASE("separable toy set trains to perfect accuracy") {
    const auto [x, y] = separable_toy();
    const SvmModel model = train_svm(x, y, 1.0);
    CHECK(predict(model, x) == y);
}

TEST_CASE("hinge loss vanishes at convergence on separable data") {
    const auto [x, y] = separable_toy();
    const SvmModel model = train_svm(x, y, 1.0);
    CHECK(hinge_loss(model, x, y) < 1e-6);
}

TEST_CASE("three classes give three pairwise models") {
    Matrix x(9, 2);
    std::vector<int> y(9);
    for (std::size_t i = 0; i < 9; ++i) {
        const int cls = static_cast<int>(i / 3);
        x.at(i, 0) = static_cast<double>(cls) * 4.0 + 0.1 * static_cast<double>(i % 3);
        x.at(i, 1) = static_cast<double>(cls % 2);
        y[i] = cls;
    }
    const SvmModel model = train_svm(x, y, 10.0);
    CHECK(model.pairwise.size() == 3);
    CHECK(model.classes == std::vector<int>{0, 1, 2});
    CHECK(predict(model, x) == y);
}

TEST_CASE("duplicating every training sample leaves held-out predictions unchanged") {
    const auto [x, y] = separable_toy();
    const SvmModel base = train_svm(x, y, 1.0);

    Matrix doubled(40, 1);
    std::vector<int> y2(40);
    for (std::size_t i = 0; i < 20; ++i) {
        doubled.at(i, 0) = x.at(i, 0);
        doubled.at(20 + i, 0) = x.at(i, 0);
        y2[i] = y[i];
        y2[20 + i] = y[i];
    }
    const SvmModel twice = train_svm(doubled, y2, 1.0);

    Matrix held_out(7, 1);
    for (std::size_t i = 0; i < 7; ++i) held_out.at(i, 0) = -3.0 + static_cast<double>(i);
    CHECK(predict(base, held_out) == predict(twice, held_out));
}

TEST_CASE("all-zero rows predict deterministically") {
    const auto [x, y] = separable_toy();
    const SvmModel model = train_svm(x, y, 1.0);

    Matrix zeros(3, 1);
    const std::vector<int> first = predict(model, zeros);
    CHECK(predict(model, zeros) == first);
    CHECK(first[0] == first[1]);
}

TEST_CASE("tie votes break to the lowest class id") {
    // force an artificial exact tie: one pairwise model each way
    SvmModel model;
    model.classes = {2, 5, 9};
    model.scaler.mean = {0.0};
    model.scaler.inv_std = {1.0};
    model.pairwise.push_back({2, 5, {1.0}, 0.5});   // x=0 -> votes 2
    model.pairwise.push_back({5, 9, {1.0}, 0.5});   // x=0 -> votes 5
    model.pairwise.push_back({2, 9, {1.0}, -0.5});  // x=0 -> votes 9
    Matrix x(1, 1);
    CHECK(predict(model, x) == std::vector<int>{2});
}

TEST_CASE("permuting rows permutes predictions") {
    const auto [x, y] = separable_toy();
    const SvmModel model = train_svm(x, y, 1.0);

    std::mt19937_64 rng(17);
    std::vector<std::size_t> order(x.rows);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);

    Matrix permuted(x.rows, x.cols);
    for (std::size_t i = 0; i < x.rows; ++i) permuted.at(i, 0) = x.at(order[i], 0);

    const std::vector<int> base = predict(model, x);
    const std::vector<int> shuffled = predict(model, permuted);
    for (std::size_t i = 0; i < x.rows; ++i) CHECK(shuffled[i] == base[order[i]]);
}

TEST_CASE("training is deterministic") {
    const auto [x, y] = separable_toy();
    const SvmModel a = train_svm(x, y, 0.1);
    const SvmModel b = train_svm(x, y, 0.1);
    CHECK(a.pairwise.front().weights == b.pairwise.front().weights);
    CHECK(a.pairwise.front().bias == b.pairwise.front().bias);
}

TEST_CASE("invalid training inputs are rejected") {
    Matrix x(2, 1);
    x.at(0, 0) = 1.0;
    x.at(1, 0) = 2.0;

    SUBCASE("single class") {
        CHECK_THROWS_AS(train_svm(x, {3, 3}, 1.0), std::invalid_argument);
    }
    SUBCASE("non-finite features") {
        x.at(1, 0) = std::numeric_limits<double>::quiet_NaN();
        CHECK_THROWS_AS(train_svm(x, {0, 1}, 1.0), std::invalid_argument);
    }
    SUBCASE("non-positive C") {
        CHECK_THROWS_AS(train_svm(x, {0, 1}, 0.0), std::invalid_argument);
    }
    SUBCASE("misaligned labels") {
        CHECK_THROWS_AS(train_svm(x, {0, 1, 1}, 1.0), std::invalid_argument);
    }
}

TEST_CASE("prediction rejects a dimension mismatch") {
    const auto [x, y] = separable_toy();
    const SvmModel model = train_svm(x, y, 1.0);
    Matrix wrong(1, 3);
    CHECK_THROWS_AS(predict(model, wrong), std::invalid_argument);
}
