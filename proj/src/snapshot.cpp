#include "tnet/snapshot.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <system_error>

namespace tnet {

using nlohmann::json;

namespace {

template <class T>
T field(const json& j, const char* key) {
    if (!j.contains(key)) throw SnapshotError(SnapshotError::Code::Schema, std::string("missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw SnapshotError(SnapshotError::Code::Schema, std::string("field '") + key + "': " + e.what());
    }
}

void put_element(json& j, const ElementState& e) {
    j["weight"] = round_sig9(e.weight);
    j["activation"] = round_sig9(e.activation);
    j["fixated"] = e.fixated;
    j["k"] = e.k;
    j["plastic"] = e.plastic;
}

void get_element(const json& j, ElementState& e) {
    e.weight = field<double>(j, "weight");
    e.activation = field<double>(j, "activation");
    e.fixated = field<bool>(j, "fixated");
    e.k = field<int>(j, "k");
    e.plastic = field<bool>(j, "plastic");
}

void round_element(ElementState& e) {
    e.weight = round_sig9(e.weight);
    e.activation = round_sig9(e.activation);
}

std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

std::string fmt9(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return buf;
}

}  // namespace

double round_sig9(double x) { return std::stod(fmt9(x)); }

Snapshot take_snapshot(const Network& net) {
    Snapshot s;
    s.tick_count = net.tick_count();
    s.seed = net.seed();
    s.params = net.params();
    s.nodes = net.nodes();
    s.edges = net.edges();
    for (auto& n : s.nodes) round_element(n);
    for (auto& e : s.edges) round_element(e);
    return s;
}

Network restore(const Snapshot& s) {
    Network net(s.params, s.seed);
    for (const auto& n : s.nodes) {
        if (n.id != net.nodes().size()) throw SnapshotError(SnapshotError::Code::Schema, "node ids must be dense");
        net.add_node(n.label, n.kind, n.weight);
        static_cast<ElementState&>(net.node(n.id)) = n;
    }
    for (const auto& e : s.edges) {
        if (e.id != net.edges().size()) throw SnapshotError(SnapshotError::Code::Schema, "edge ids must be dense");
        if (!net.has_node(e.src) || !net.has_node(e.dst)) {
            throw SnapshotError(SnapshotError::Code::Schema, "edge e" + std::to_string(e.id) + " has a dangling endpoint");
        }
        net.add_edge(e.src, e.dst, e.weight, e.reciprocal);
        static_cast<ElementState&>(net.edge(e.id)) = e;
    }
    net.restore_tick_count(s.tick_count);
    return net;
}

json to_json(const Params& p) {
    return json{{"dw", p.dw},
                {"decay_w", p.decay_w},
                {"theta", p.theta},
                {"w_max", p.w_max},
                {"a_max", p.a_max},
                {"decay_a", p.decay_a},
                {"beta", p.beta},
                {"back_factor", p.back_factor},
                {"reset_factor", p.reset_factor},
                {"fire_threshold_det", p.fire_threshold_det},
                {"boost", p.boost},
                {"act_base", p.act_base},
                {"act_gain", p.act_gain},
                {"deterministic", p.deterministic}};
}

Params params_from_json(const json& j, Params p) {
    if (!j.is_object()) throw SnapshotError(SnapshotError::Code::Schema, "params must be an object");
    const std::set<std::string> known{"dw",   "decay_w", "theta", "w_max", "a_max", "decay_a", "beta", "back_factor",
                                      "reset_factor", "fire_threshold_det", "boost", "act_base", "act_gain",
                                      "deterministic"};
    for (const auto& [k, v] : j.items()) {
        if (!known.count(k)) throw SnapshotError(SnapshotError::Code::Schema, "params." + k + ": unknown field");
    }
    auto num = [&](const char* key, double& out) {
        if (!j.contains(key)) return;
        if (!j.at(key).is_number()) {
            throw SnapshotError(SnapshotError::Code::Schema, std::string("params.") + key + ": expected a number");
        }
        out = j.at(key).get<double>();
    };
    num("dw", p.dw);
    num("decay_w", p.decay_w);
    num("theta", p.theta);
    num("w_max", p.w_max);
    num("a_max", p.a_max);
    num("decay_a", p.decay_a);
    num("beta", p.beta);
    num("back_factor", p.back_factor);
    num("reset_factor", p.reset_factor);
    num("fire_threshold_det", p.fire_threshold_det);
    num("boost", p.boost);
    num("act_base", p.act_base);
    num("act_gain", p.act_gain);
    if (j.contains("deterministic")) {
        if (!j.at("deterministic").is_boolean()) {
            throw SnapshotError(SnapshotError::Code::Schema, "params.deterministic: expected a boolean");
        }
        p.deterministic = j.at("deterministic").get<bool>();
    }
    return p;
}

json to_json(const Snapshot& s) {
    json nodes = json::array();
    for (const auto& n : s.nodes) {
        json j{{"id", n.id}, {"label", n.label}, {"kind", to_string(n.kind)}};
        put_element(j, n);
        nodes.push_back(std::move(j));
    }
    json edges = json::array();
    for (const auto& e : s.edges) {
        json j{{"id", e.id}, {"src", e.src}, {"dst", e.dst}, {"reciprocal", e.reciprocal}};
        put_element(j, e);
        edges.push_back(std::move(j));
    }
    json params = to_json(s.params);
    for (auto& [k, v] : params.items()) {
        if (v.is_number_float()) v = round_sig9(v.get<double>());
    }
    return json{{"version", s.version}, {"tick_count", s.tick_count}, {"seed", s.seed},
                {"params", std::move(params)}, {"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

namespace {

void only_keys(const json& j, const std::string& where, const std::set<std::string>& known) {
    if (!j.is_object()) throw SnapshotError(SnapshotError::Code::Schema, where + ": expected an object");
    for (const auto& [k, v] : j.items()) {
        if (!known.count(k)) throw SnapshotError(SnapshotError::Code::Schema, where + "." + k + ": unknown field");
    }
}

}  // namespace

Snapshot snapshot_from_json(const json& j) {
    only_keys(j, "snapshot", {"version", "tick_count", "seed", "params", "nodes", "edges"});
    Snapshot s;
    s.version = field<int>(j, "version");
    if (s.version != kSnapshotVersion) {
        throw SnapshotError(SnapshotError::Code::Schema, "unsupported snapshot version " + std::to_string(s.version));
    }
    s.tick_count = field<std::uint64_t>(j, "tick_count");
    s.seed = field<std::uint64_t>(j, "seed");
    s.params = params_from_json(field<json>(j, "params"));
    for (const auto& jn : field<json>(j, "nodes")) {
        only_keys(jn, "nodes[]", {"id", "label", "kind", "weight", "activation", "fixated", "k", "plastic"});
        NodeState n;
        n.id = field<NodeId>(jn, "id");
        n.label = field<std::string>(jn, "label");
        try {
            n.kind = kind_from_string(field<std::string>(jn, "kind"));
        } catch (const NetworkError& e) {
            throw SnapshotError(SnapshotError::Code::Schema, e.what());
        }
        get_element(jn, n);
        s.nodes.push_back(std::move(n));
    }
    for (const auto& je : field<json>(j, "edges")) {
        only_keys(je, "edges[]", {"id", "src", "dst", "reciprocal", "weight", "activation", "fixated", "k", "plastic"});
        EdgeState e;
        e.id = field<EdgeId>(je, "id");
        e.src = field<NodeId>(je, "src");
        e.dst = field<NodeId>(je, "dst");
        e.reciprocal = field<bool>(je, "reciprocal");
        get_element(je, e);
        s.edges.push_back(std::move(e));
    }
    return s;
}

std::string snapshot_text(const Snapshot& s) { return to_json(s).dump(2) + "\n"; }

std::string dot_text(const Snapshot& s) {
    std::ostringstream out;
    out << "digraph tnet {\n";
    for (const auto& n : s.nodes) {
        const std::string label = n.label.empty() ? "n" + std::to_string(n.id) : n.label;
        out << "  n" << n.id << " [label=\"" << dot_escape(label) << "\", shape="
            << (n.fixated ? "doublecircle" : "circle") << "];\n";
    }
    for (const auto& e : s.edges) {
        out << "  n" << e.src << " -> n" << e.dst << " [penwidth=" << fmt9(2.0 * e.weight);
        if (e.reciprocal) out << ", style=dashed";
        out << "];\n";
    }
    out << "}\n";
    return out.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw SnapshotError(SnapshotError::Code::Io, "cannot write " + path.string());
    out << text;
    if (!out) throw SnapshotError(SnapshotError::Code::Io, "write failed for " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SnapshotError(SnapshotError::Code::Io, "cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void export_snapshot(const Snapshot& s, ExportFormat format, const std::filesystem::path& path) {
    write_text(path, format == ExportFormat::json ? snapshot_text(s) : dot_text(s));
}

Snapshot import_snapshot(const std::filesystem::path& path) {
    json j;
    try {
        j = json::parse(read_text(path));
    } catch (const json::parse_error& e) {
        throw SnapshotError(SnapshotError::Code::Schema, path.string() + ": " + e.what());
    }
    return snapshot_from_json(j);
}

}  // namespace tnet
