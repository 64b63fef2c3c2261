#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "apm/graph.hpp"

namespace apm {

/*
 * Canonical adjacent-point-pattern key: the unordered pair of endpoint
 * labels plus the connecting edge's label, when the graph has edge labels.
 */
struct AppKey {
    Label label_lo = 0;
    Label label_hi = 0;  // label_lo <= label_hi
    std::optional<Label> edge_label;

    friend bool operator==(const AppKey&, const AppKey&) = default;
};

// Order-insensitive in the two vertex labels.
inline AppKey canonical_app_key(Label a, Label b,
                                std::optional<Label> edge_label = std::nullopt) {
    AppKey k;
    k.label_lo = a < b ? a : b;
    k.label_hi = a < b ? b : a;
    k.edge_label = edge_label;
    return k;
}

struct AppKeyHash {
    std::size_t operator()(const AppKey& k) const noexcept {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        auto mix = [&h](std::uint64_t v) {
            h ^= v;
            h *= 0x100000001b3ULL;
        };
        mix(static_cast<std::uint32_t>(k.label_lo));
        mix(static_cast<std::uint32_t>(k.label_hi));
        mix(k.edge_label ? static_cast<std::uint32_t>(*k.edge_label) + 1ULL : 0ULL);
        return static_cast<std::size_t>(h);
    }
};

struct OutOfVocabulary : std::runtime_error {
    explicit OutOfVocabulary(const char* what) : std::runtime_error(what) {}
};

/*
 * Injective mapping from AppKey to a dense integer label: equal keys get
 * equal labels, distinct keys distinct labels, numbered 0,1,... in
 * first-seen order. Two-phase contract: intern() during the registration
 * phase, then freeze(); a frozen interner rejects unseen keys instead of
 * allocating, and is safe to share across threads read-only.
 */
class LabelInterner {
public:
    // Returns the key's label, assigning the next dense label to unseen keys.
    // Throws OutOfVocabulary for an unseen key once frozen.
    Label intern(const AppKey& key) {
        auto it = forward_.find(key);
        if (it != forward_.end()) return it->second;
        if (frozen_) throw OutOfVocabulary("unseen pattern key in frozen interner");
        const Label label = static_cast<Label>(reverse_.size());
        forward_.emplace(key, label);
        reverse_.push_back(key);
        return label;
    }

    // Lookup that never allocates; nullopt for unregistered keys.
    std::optional<Label> lookup(const AppKey& key) const {
        auto it = forward_.find(key);
        if (it == forward_.end()) return std::nullopt;
        return it->second;
    }

    const AppKey& key_of(Label label) const { return reverse_.at(static_cast<std::size_t>(label)); }

    std::size_t size() const { return reverse_.size(); }
    void freeze() { frozen_ = true; }
    bool frozen() const { return frozen_; }

private:
    std::unordered_map<AppKey, Label, AppKeyHash> forward_;
    std::vector<AppKey> reverse_;
    bool frozen_ = false;
};

}  // namespace apm
