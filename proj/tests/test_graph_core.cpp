#include <random>
#include <set>
#include <unordered_set>

#include "doctest.h"

#include "apm/graph.hpp"
#include "apm/interner.hpp"

using namespace apm;

TEST_CASE("canonical_app_key is order-insensitive in the vertex labels") {
    CHECK(canonical_app_key(1, 2, 5) == canonical_app_key(2, 1, 5));
    CHECK(canonical_app_key(4, 9) == canonical_app_key(9, 4));
    CHECK(canonical_app_key(1, 2, 5).label_lo == 1);
    CHECK(canonical_app_key(1, 2, 5).label_hi == 2);
}

TEST_CASE("canonical_app_key distinguishes edge labels") {
    CHECK(canonical_app_key(3, 3, 7) != canonical_app_key(3, 3, 8));
    // vertex-only pattern is distinct from any edge-labeled pattern
    CHECK(canonical_app_key(4, 9) != canonical_app_key(4, 9, 0));
    CHECK(canonical_app_key(4, 9).edge_label == std::nullopt);
}

TEST_CASE("interner assigns dense first-seen labels") {
    LabelInterner interner;
    const AppKey a = canonical_app_key(1, 2, 0);
    const AppKey b = canonical_app_key(2, 2, 0);
    CHECK(interner.intern(a) == 0);
    CHECK(interner.intern(b) == 1);
    CHECK(interner.intern(a) == 0);  // idempotent
    CHECK(interner.size() == 2);
    CHECK(interner.key_of(0) == a);
    CHECK(interner.key_of(1) == b);
}

TEST_CASE("frozen interner rejects unseen keys but serves known ones") {
    LabelInterner interner;
    const AppKey known = canonical_app_key(0, 1);
    interner.intern(known);
    interner.freeze();
    CHECK(interner.intern(known) == 0);
    CHECK(interner.lookup(known) == 0);
    const AppKey unseen = canonical_app_key(5, 6);
    CHECK(interner.lookup(unseen) == std::nullopt);
    CHECK_THROWS_AS(interner.intern(unseen), OutOfVocabulary);
    CHECK(interner.size() == 1);
}

TEST_CASE("interner injectivity and density under random key streams") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<Label> label(0, 30);
    std::uniform_int_distribution<int> has_edge(0, 1);

    LabelInterner interner;
    std::set<std::tuple<Label, Label, std::optional<Label>>> distinct_keys;
    std::unordered_set<Label> distinct_labels;
    for (int i = 0; i < 10000; ++i) {
        const Label a = label(rng);
        const Label b = label(rng);
        const std::optional<Label> e =
            has_edge(rng) ? std::optional<Label>(label(rng)) : std::nullopt;
        const AppKey key = canonical_app_key(a, b, e);
        distinct_keys.emplace(key.label_lo, key.label_hi, key.edge_label);
        const Label assigned = interner.intern(key);
        distinct_labels.insert(assigned);
        CHECK(interner.key_of(assigned) == key);  // reverse round-trip
    }
    CHECK(distinct_labels.size() == distinct_keys.size());
    CHECK(interner.size() == distinct_keys.size());
    // dense: labels are exactly 0..n-1
    for (std::size_t l = 0; l < interner.size(); ++l) {
        CHECK(distinct_labels.count(static_cast<Label>(l)) == 1);
    }
}

TEST_CASE("validate accepts a labeled triangle") {
    LabeledGraph g;
    g.num_vertices = 3;
    g.vertex_labels = {1, 2, 3};
    g.edges = {{0, 1}, {1, 2}, {0, 2}};
    g.edge_labels = std::vector<Label>{7, 8, 9};
    CHECK(validate(g) == std::nullopt);
}

TEST_CASE("validate reports the first violation with indices") {
    LabeledGraph g;
    g.num_vertices = 3;
    g.vertex_labels = {1, 2, 3};

    SUBCASE("self-loop") {
        g.edges = {{2, 2}};
        const auto v = validate(g);
        REQUIRE(v.has_value());
        CHECK(v->find("self-loop") != std::string::npos);
    }
    SUBCASE("edge label misalignment") {
        g.edges = {{0, 1}, {1, 2}};
        g.edge_labels = std::vector<Label>{5};
        const auto v = validate(g);
        REQUIRE(v.has_value());
        CHECK(v->find("edge label count") != std::string::npos);
    }
    SUBCASE("vertex index out of range") {
        g.edges = {{0, 3}};
        CHECK(validate(g).has_value());
    }
    SUBCASE("duplicate edge, either orientation") {
        g.edges = {{0, 1}, {1, 0}};
        const auto v = validate(g);
        REQUIRE(v.has_value());
        CHECK(v->find("duplicate") != std::string::npos);
    }
    SUBCASE("layer >= 1 requires edge labels") {
        g.edges = {{0, 1}};
        g.layer = 1;
        CHECK(validate(g).has_value());
    }
    SUBCASE("vertex label count mismatch") {
        g.vertex_labels = {1};
        CHECK(validate(g).has_value());
    }
}
