#include "tnet/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <mutex>
#include <set>
#include <thread>

namespace tnet {

using nlohmann::json;

namespace {

const std::set<std::string> kFig1a{"136", "28", "48361", "756", "98"};
const std::set<std::string> kFig1b{"75628136", "75648361", "75698136"};

std::map<std::string, std::vector<std::pair<std::string, double>>> fixated_links(const Snapshot& s) {
    std::map<std::string, std::vector<std::pair<std::string, double>>> out;
    for (const auto& e : s.edges) {
        const NodeState& a = s.nodes.at(e.src);
        const NodeState& b = s.nodes.at(e.dst);
        if (e.weight <= 0.0 || a.kind != Kind::chunk || b.kind != Kind::chunk || !a.fixated || !b.fixated) continue;
        out[a.label].emplace_back(b.label, e.weight);
    }
    return out;
}

std::set<std::string> targets(const std::vector<std::pair<std::string, double>>& links) {
    std::set<std::string> t;
    for (const auto& [l, w] : links) t.insert(l);
    return t;
}

}  // namespace

Grid grid_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("grid: expected an object of name -> value list");
    Grid g;
    for (const auto& [k, v] : j.items()) {
        if (!v.is_array() || v.empty()) throw ConfigError("grid." + k + ": expected a non-empty array");
        g[k] = v.get<std::vector<json>>();
    }
    return g;
}

Grid load_grid(const std::filesystem::path& path) {
    try {
        return grid_from_json(json::parse(read_text(path)));
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("grid: ") + e.what());
    } catch (const SnapshotError& e) {
        throw ConfigError(std::string("grid: ") + e.what());
    }
}

std::vector<std::string> fixated_chunk_labels(const Snapshot& s) {
    std::vector<std::string> out;
    for (const auto& n : s.nodes) {
        if (n.kind == Kind::chunk && n.fixated) out.push_back(n.label);
    }
    std::sort(out.begin(), out.end());
    return out;
}

GoldenFlags check_goldens(const Snapshot& s) {
    GoldenFlags f;
    const auto labels = fixated_chunk_labels(s);
    const std::set<std::string> set(labels.begin(), labels.end());
    f.fig1a_labels = set == kFig1a;
    f.fig1b_labels = set == kFig1b;
    if (f.fig1a_labels) {
        auto links = fixated_links(s);
        f.fig1a_relations = targets(links["756"]) == std::set<std::string>{"48361", "98", "28"} &&
                            targets(links["98"]) == std::set<std::string>{"136"} &&
                            targets(links["28"]) == std::set<std::string>{"136"};
        if (f.fig1a_relations) {
            const auto& out = links["756"];
            f.fig1a_equal_weights = std::all_of(out.begin(), out.end(), [&](const auto& l) { return l.second == out.front().second; });
        }
    }
    return f;
}

std::uint64_t label_set_hash(const std::vector<std::string>& labels) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    bool first = true;
    for (const auto& l : labels) {
        if (!first) {
            h ^= static_cast<unsigned char>('\n');
            h *= 0x100000001b3ULL;
        }
        first = false;
        for (unsigned char c : l) {
            h ^= c;
            h *= 0x100000001b3ULL;
        }
    }
    return h;
}

std::vector<SweepRow> sweep(const Grid& grid, const ExperimentConfig& base, unsigned threads) {
    std::vector<std::map<std::string, json>> cells{{}};
    for (const auto& [key, values] : grid) {
        std::vector<std::map<std::string, json>> next;
        for (const auto& c : cells) {
            for (const auto& v : values) {
                auto cell = c;
                cell[key] = v;
                next.push_back(std::move(cell));
            }
        }
        cells = std::move(next);
    }
    std::vector<ExperimentConfig> cfgs;
    for (const auto& cell : cells) {
        ExperimentConfig cfg = base;
        cfg.outputs = {};
        for (const auto& [k, v] : cell) set_param(cfg, k, v);
        cfgs.push_back(std::move(cfg));
    }

    std::vector<SweepRow> rows(cells.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    auto worker = [&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) {
            try {
                const ExperimentResult r = run_experiment(cfgs[i]);
                SweepRow& row = rows[i];
                row.cell = cells[i];
                row.fixated = fixated_chunk_labels(r.snapshot);
                row.label_hash = label_set_hash(row.fixated);
                row.golden = check_goldens(r.snapshot);
            } catch (...) {
                std::lock_guard lock(failure_mu);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, cells.size()));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    return rows;
}

std::string sweep_table(const Grid& grid, const std::vector<SweepRow>& rows) {
    std::string out;
    for (const auto& [k, v] : grid) out += k + "\t";
    out += "fixated_count\tlabel_hash\tfig1a\tfig1b\tlabels\n";
    for (const auto& r : rows) {
        for (const auto& [k, v] : grid) out += r.cell.at(k).dump() + "\t";
        char hash[20];
        std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(r.label_hash));
        out += std::to_string(r.fixated.size()) + "\t" + hash + "\t";
        out += (r.golden.fig1a_labels && r.golden.fig1a_relations) ? "pass\t" : "fail\t";
        out += r.golden.fig1b_labels ? "pass\t" : "fail\t";
        for (std::size_t i = 0; i < r.fixated.size(); ++i) out += (i ? "," : "") + r.fixated[i];
        out += "\n";
    }
    return out;
}

}  // namespace tnet
