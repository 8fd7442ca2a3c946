#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "tnet/network.hpp"

namespace tnet {

inline constexpr int kSnapshotVersion = 1;

/// Serializable network state. Pending signals are not captured, so
/// snapshots are taken between ticks.
struct Snapshot {
    int version = kSnapshotVersion;
    std::uint64_t tick_count = 0;
    std::uint64_t seed = 0;
    Params params;
    std::vector<NodeState> nodes;
    std::vector<EdgeState> edges;

    bool operator==(const Snapshot&) const = default;
};

class SnapshotError : public std::runtime_error {
public:
    enum class Code { Io, Schema };

    SnapshotError(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Code code() const { return code_; }

private:
    Code code_;
};

/// Nearest double to the 9-significant-digit decimal form of `x`.
double round_sig9(double x);

/// Copy of the network with every real value passed through round_sig9.
Snapshot take_snapshot(const Network& net);
Network restore(const Snapshot& s);

nlohmann::json to_json(const Snapshot& s);
nlohmann::json to_json(const Params& p);
Snapshot snapshot_from_json(const nlohmann::json& j);
/// Overrides fields present in `j`; unknown keys raise SnapshotError(Schema).
Params params_from_json(const nlohmann::json& j, Params base = {});

std::string snapshot_text(const Snapshot& s);
std::string dot_text(const Snapshot& s);

enum class ExportFormat { json, dot };

void export_snapshot(const Snapshot& s, ExportFormat format, const std::filesystem::path& path);
Snapshot import_snapshot(const std::filesystem::path& path);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace tnet
