#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "tnet/chunker.hpp"
#include "tnet/learning.hpp"
#include "tnet/network.hpp"
#include "tnet/planner.hpp"
#include "tnet/snapshot.hpp"
#include "tnet/transducer.hpp"

namespace tnet {

inline constexpr int kConfigVersion = 1;

enum class ExperimentKind { segment, predict, plan, hebbian, custom };

const char* to_string(ExperimentKind k);

/// Messages start with the dotted path of the offending field.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct OutputPaths {
    std::optional<std::filesystem::path> snapshot;
    std::optional<std::filesystem::path> log;
    std::optional<std::filesystem::path> dot;
};

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::segment;
    std::string corpus = "fig1a";
    Params params;
    ChunkerParams chunker;
    PlannerParams planner;
    InnateSpec innate;
    std::uint64_t seed = 0;
    // Kind-specific sections, validated when the run starts.
    nlohmann::json schedule;
    nlohmann::json scenario;
    nlohmann::json steps;
    OutputPaths outputs;
};

/// Relative corpus and output paths resolve against `base_dir`.
ExperimentConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

/// Sets one substrate or chunker/planner parameter by name ("dw",
/// "chunker.W", "planner.t_act", ...).
void set_param(ExperimentConfig& cfg, const std::string& name, const nlohmann::json& value);

struct ExperimentResult {
    Snapshot snapshot;
    EventLog log;
    std::vector<std::string> fixated_chunks;
    /// Human-readable result lines.
    std::vector<std::string> summary;
};

ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// One line per event, as produced by format_event.
std::string log_text(const EventLog& log);

/// Writes whichever outputs the config names.
void write_outputs(const ExperimentConfig& cfg, const ExperimentResult& r);

/// {"states": [...], "inputs": [...], "outputs": [...], "rows": [{"state",
/// "input", "outcomes": [{"state", "output", "p"}]}]}
TransducerSpec transducer_spec_from_json(const nlohmann::json& j);

}  // namespace tnet
