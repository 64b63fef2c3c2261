#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "apm/cross_validation.hpp"
#include "apm/pipeline.hpp"
#include "apm/tu_dataset.hpp"

namespace apm {

inline constexpr const char* kToolName = "apm";
inline constexpr const char* kToolVersion = "0.1.0";

// FNV-1a 64-bit over a byte string, hex-encoded.
std::string fnv1a_hex(const std::string& bytes);

// Digest over the dataset's flat files (fixed order), so runs can be tied
// to the exact input bytes.
std::string dataset_digest(const std::filesystem::path& dir, const std::string& name);

/*
 * Run provenance written next to every output artifact. The digest covers
 * the deterministic core (command, config, dataset digest, seed, version)
 * and never the timings, so reports stay byte-identical across runs.
 */
struct RunManifest {
    std::string command;
    std::string config_text;  // flat key=value snapshot
    std::string dataset_name;
    std::string dataset_digest;
    std::uint64_t seed = 0;
    std::string tool_version = kToolVersion;
    PhaseTimings timings;

    std::string digest() const;
    std::string to_json() const;  // pretty, trailing newline
};

std::string selection_mode_name(SelectionMode mode);

std::string config_key_values(const CvConfig& config);

// Canonical report serialization: deterministic key order and number
// formatting, no timing data.
std::string report_to_json(const CvReport& report, const CvConfig& config,
                           const std::string& manifest_digest);

std::string summary_to_json(const DatasetSummary& summary, const ParseReport& report);

// Sidecar for an embedding CSV: vocabulary size per layer, requested and
// effective D, the selected indices, and how the vocabulary was fit.
std::string embedding_sidecar_json(const std::vector<std::size_t>& vocab_per_layer,
                                   std::size_t d_requested, std::size_t d_effective,
                                   const std::vector<std::size_t>& selected,
                                   const std::string& selection_mode,
                                   const std::string& vocabulary_scope,
                                   const std::string& manifest_digest);

}  // namespace apm
