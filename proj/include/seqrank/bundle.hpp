#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "seqrank/model.hpp"

namespace seqrank {

inline constexpr const char* kToolVersion = "0.1.0";

// Reproducibility header carried by every output file. Deliberately excludes
// wall-clock time so identical configs produce identical bytes.
struct RunMeta {
    std::string config_hash;
    std::uint64_t seed = 0;
    double tolerance = 1e-10;
    int max_iterations = 10000;
    std::vector<std::string> notes;
};

struct IngestProvenance {
    std::string filters;
    int dedup_removed = 0;
    int dropped_cohort = 0;
    int dropped_transfer = 0;
    int dropped_gpa = 0;
    int zero_record_actors_kept = 0;
    std::vector<std::string> pruned_items;
    std::vector<std::string> warnings;
};

// Everything cmd_ingest produces: the matrices, the catalog, and enough
// provenance to reproduce the run.
struct MatrixBundle {
    ItemCatalog catalog;
    int n_s_before = 0;
    int n_s_after = 0;
    CountMatrix c;
    TransitionMatrix p;
    FlowMatrix f;
    MeasurementGraph g;
    IngestProvenance provenance;
};

nlohmann::ordered_json meta_to_json(const RunMeta& meta);

nlohmann::ordered_json bundle_to_json(const MatrixBundle& bundle, const RunMeta& meta);
MatrixBundle bundle_from_json(const nlohmann::json& j);

nlohmann::ordered_json ranking_to_json(const Ranking& r, const ItemCatalog& catalog,
                                       const RunMeta& meta);
// Rebuilds a ranking against the catalog, remapping item ids to indices.
Ranking ranking_from_json(const nlohmann::json& j, const ItemCatalog& catalog);

// FNV-1a hash of a canonical config string, hex-encoded.
std::string config_hash(const std::string& canonical);

// Whole-file atomic write (temp file + rename).
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

// Loads an id,name CSV catalog. Item order follows first appearance.
ItemCatalog load_catalog_csv(std::istream& source);

} // namespace seqrank
