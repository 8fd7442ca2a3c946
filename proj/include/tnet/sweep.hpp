#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "tnet/experiment.hpp"

namespace tnet {

/// Parameter name -> values. Names as accepted by set_param.
using Grid = std::map<std::string, std::vector<nlohmann::json>>;

Grid grid_from_json(const nlohmann::json& j);
Grid load_grid(const std::filesystem::path& path);

/// Structural checks on a segment-run snapshot.
struct GoldenFlags {
    bool fig1a_labels = false;
    bool fig1a_relations = false;
    bool fig1a_equal_weights = false;
    bool fig1b_labels = false;
};

GoldenFlags check_goldens(const Snapshot& s);

struct SweepRow {
    std::map<std::string, nlohmann::json> cell;
    std::vector<std::string> fixated;
    std::uint64_t label_hash = 0;
    GoldenFlags golden;
};

/// 64-bit FNV-1a over the labels joined by '\n'.
std::uint64_t label_set_hash(const std::vector<std::string>& labels);

/// Sorted fixated chunk labels in a snapshot.
std::vector<std::string> fixated_chunk_labels(const Snapshot& s);

/// Cartesian product over the grid, keys in sorted order with the last
/// key varying fastest. Cells run on up to `threads` workers (0 picks
/// the hardware concurrency); rows come back in cell order.
std::vector<SweepRow> sweep(const Grid& grid, const ExperimentConfig& base, unsigned threads = 0);

/// Tab-separated table with a header row.
std::string sweep_table(const Grid& grid, const std::vector<SweepRow>& rows);

}  // namespace tnet
