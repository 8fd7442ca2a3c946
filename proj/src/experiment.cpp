#include "tnet/experiment.hpp"

#include <cstdio>
#include <set>

#include "tnet/corpus.hpp"
#include "tnet/predictor.hpp"
#include "tnet/rng.hpp"

namespace tnet {

using nlohmann::json;

namespace {

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return buf;
}

void check_keys(const json& j, const std::string& path, const std::set<std::string>& known) {
    if (!j.is_object()) throw ConfigError(path + ": expected an object");
    for (const auto& [k, v] : j.items()) {
        if (!known.count(k)) throw ConfigError((path.empty() ? k : path + "." + k) + ": unknown field");
    }
}

std::string join_path(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

template <class T>
T get(const json& j, const std::string& path, const std::string& key) {
    const std::string where = join_path(path, key);
    if (!j.contains(key)) throw ConfigError(where + ": required");
    const json& v = j.at(key);
    if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) throw ConfigError(where + ": expected a boolean");
    } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string()) throw ConfigError(where + ": expected a string");
    } else if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer()) throw ConfigError(where + ": expected an integer");
        if constexpr (std::is_unsigned_v<T>) {
            if (v.is_number_unsigned() == false && v.get<long long>() < 0) throw ConfigError(where + ": must be >= 0");
        }
    } else {
        if (!v.is_number()) throw ConfigError(where + ": expected a number");
    }
    return v.get<T>();
}

template <class T>
T get_or(const json& j, const std::string& path, const std::string& key, T fallback) {
    return j.contains(key) ? get<T>(j, path, key) : fallback;
}

void apply_chunker(const json& j, ChunkerParams& cp) {
    check_keys(j, "chunker", {"W", "l_min", "window_coact", "order_coincident", "order_single", "order_sim", "match_gain"});
    cp.W = get_or(j, "chunker", "W", cp.W);
    cp.l_min = get_or(j, "chunker", "l_min", cp.l_min);
    cp.window_coact = get_or(j, "chunker", "window_coact", cp.window_coact);
    cp.order_coincident = get_or(j, "chunker", "order_coincident", cp.order_coincident);
    cp.order_single = get_or(j, "chunker", "order_single", cp.order_single);
    cp.order_sim = get_or(j, "chunker", "order_sim", cp.order_sim);
    cp.match_gain = get_or(j, "chunker", "match_gain", cp.match_gain);
}

void apply_planner(const json& j, PlannerParams& pp) {
    check_keys(j, "planner",
               {"t_act", "t_rel", "max_rounds", "source_strength", "goal_value", "back_uses_reciprocal_weight"});
    pp.t_act = get_or(j, "planner", "t_act", pp.t_act);
    pp.t_rel = get_or(j, "planner", "t_rel", pp.t_rel);
    pp.max_rounds = get_or(j, "planner", "max_rounds", pp.max_rounds);
    pp.source_strength = get_or(j, "planner", "source_strength", pp.source_strength);
    pp.goal_value = get_or(j, "planner", "goal_value", pp.goal_value);
    pp.back_uses_reciprocal_weight = get_or(j, "planner", "back_uses_reciprocal_weight", pp.back_uses_reciprocal_weight);
}

Kind parse_kind(const std::string& s, const std::string& where) {
    try {
        return kind_from_string(s);
    } catch (const NetworkError&) {
        throw ConfigError(where + ": unknown node kind '" + s + "'");
    }
}

InnateSpec parse_innate(const json& j) {
    check_keys(j, "innate", {"nodes", "edges", "reward_bindings"});
    InnateSpec spec;
    if (j.contains("nodes")) {
        for (std::size_t i = 0; i < j["nodes"].size(); ++i) {
            const std::string path = "innate.nodes[" + std::to_string(i) + "]";
            const json& n = j["nodes"][i];
            check_keys(n, path, {"label", "kind", "weight"});
            spec.nodes.push_back({get<std::string>(n, path, "label"),
                                  parse_kind(get_or<std::string>(n, path, "kind", "plain"), path + ".kind"),
                                  get<double>(n, path, "weight")});
        }
    }
    if (j.contains("edges")) {
        for (std::size_t i = 0; i < j["edges"].size(); ++i) {
            const std::string path = "innate.edges[" + std::to_string(i) + "]";
            const json& e = j["edges"][i];
            check_keys(e, path, {"src", "dst", "weight"});
            spec.edges.push_back({get<std::string>(e, path, "src"), get<std::string>(e, path, "dst"), get<double>(e, path, "weight")});
        }
    }
    if (j.contains("reward_bindings")) {
        for (std::size_t i = 0; i < j["reward_bindings"].size(); ++i) {
            const std::string path = "innate.reward_bindings[" + std::to_string(i) + "]";
            const json& b = j["reward_bindings"][i];
            check_keys(b, path, {"reward", "effector"});
            spec.reward_bindings.push_back({get<std::string>(b, path, "reward"), get<std::string>(b, path, "effector")});
        }
    }
    return spec;
}

std::filesystem::path resolve_path(const std::filesystem::path& base, const std::string& p) {
    std::filesystem::path path(p);
    return path.is_absolute() || base.empty() ? path : base / path;
}

void validate(const ExperimentConfig& cfg) {
    try {
        cfg.params.validate();
    } catch (const NetworkError& e) {
        throw ConfigError(std::string("params: ") + e.what());
    }
    try {
        cfg.chunker.validate();
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    try {
        cfg.planner.validate(cfg.params);
    } catch (const PlannerError& e) {
        throw ConfigError(e.what());
    }
}

Network build_network(const ExperimentConfig& cfg) {
    Network net(cfg.params, cfg.seed);
    try {
        inject_innate(net, cfg.innate);
    } catch (const LearningError& e) {
        throw ConfigError(std::string("innate: ") + e.what());
    }
    return net;
}

NodeId lookup_node(const Network& net, const json& j, const std::string& path, const std::string& key) {
    const std::string label = get<std::string>(j, path, key);
    auto id = net.find_node(label);
    if (!id) throw ConfigError(join_path(path, key) + ": unknown node '" + label + "'");
    return *id;
}

NodeId ensure_node(Network& net, const std::string& label, Kind kind = Kind::plain, double weight = 0.0) {
    if (auto id = net.find_node(label)) return *id;
    return net.add_node(label, kind, weight);
}

std::string label_of(const Network& net, NodeId n) {
    const auto& ns = net.node(n);
    return ns.label.empty() ? "n" + std::to_string(n) : ns.label;
}

void run_segment(const ExperimentConfig& cfg, ExperimentResult& r) {
    std::vector<SymbolString> streams;
    try {
        streams = resolve_corpus(cfg.corpus);
    } catch (const CorpusError& e) {
        throw ConfigError(std::string("corpus: ") + e.what());
    }
    ChunkerParams cp = cfg.chunker;
    cp.substrate = cfg.params;
    Chunker ch(build_network(cfg), cp);
    for (const auto& s : streams) {
        ch.observe(s);
        ch.end_stream();
    }
    r.log = ch.log();
    r.fixated_chunks = ch.fixated_chunks();
    std::string line = "fixated:";
    for (const auto& l : r.fixated_chunks) line += " " + l;
    r.summary.push_back(line);
    const Network& net = ch.network();
    for (const auto& l : r.fixated_chunks) {
        const NodeId id = net.node_id(l);
        std::string edges = "  " + l + " ->";
        for (EdgeId e : net.out_edges(id)) {
            const EdgeState& es = net.edge(e);
            const NodeState& d = net.node(es.dst);
            if (es.weight > 0.0 && d.kind == Kind::chunk && d.fixated) edges += " " + d.label + "(" + fmt(es.weight) + ")";
        }
        r.summary.push_back(edges);
    }
    r.snapshot = take_snapshot(net);
}

void run_predict(const ExperimentConfig& cfg, ExperimentResult& r) {
    Network net = build_network(cfg);
    net.attach_log(&r.log);
    const json& sc = cfg.scenario.is_null() ? json::object() : cfg.scenario;
    check_keys(sc, "scenario", {"cue", "outcome"});
    const NodeId cue = ensure_node(net, get_or<std::string>(sc, "scenario", "cue", "Bell"));
    const NodeId food = ensure_node(net, get_or<std::string>(sc, "scenario", "outcome", "Food"));
    const PredictionMotif m = build_motif(net, cue, food);

    std::vector<bool> outcomes;
    if (cfg.schedule.is_array()) {
        for (std::size_t i = 0; i < cfg.schedule.size(); ++i) {
            if (!cfg.schedule[i].is_boolean()) throw ConfigError("schedule[" + std::to_string(i) + "]: expected a boolean");
            outcomes.push_back(cfg.schedule[i].get<bool>());
        }
    } else if (cfg.schedule.is_object()) {
        check_keys(cfg.schedule, "schedule", {"probability", "trials"});
        const double prob = get<double>(cfg.schedule, "schedule", "probability");
        const int trials = get<int>(cfg.schedule, "schedule", "trials");
        if (prob < 0.0 || prob > 1.0) throw ConfigError("schedule.probability: must lie in [0,1]");
        if (trials < 0) throw ConfigError("schedule.trials: must be >= 0");
        Rng rng(cfg.seed, 1);
        for (int i = 0; i < trials; ++i) outcomes.push_back(rng.uniform() < prob);
    } else {
        throw ConfigError("schedule: required for predict runs (array of booleans or {probability, trials})");
    }

    std::string line = "errors:";
    for (bool present : outcomes) {
        const TrialResult t = trial(net, m, present);
        r.log.push_back({net.tick_count(), "trial", ElementRef::node(cue).key(), t.error});
        line += " " + fmt(t.error);
    }
    r.summary.push_back(line);
    net.attach_log(nullptr);
    r.snapshot = take_snapshot(net);
}

void run_plan(const ExperimentConfig& cfg, ExperimentResult& r) {
    Network net = build_network(cfg);
    const json& sc = cfg.scenario;
    check_keys(sc, "scenario", {"nodes", "edges", "source", "goal", "context", "policy"});
    const double w_max = cfg.params.w_max;
    if (sc.contains("nodes")) {
        for (std::size_t i = 0; i < sc["nodes"].size(); ++i) {
            const std::string path = "scenario.nodes[" + std::to_string(i) + "]";
            const json& n = sc["nodes"][i];
            check_keys(n, path, {"label", "kind", "weight"});
            const std::string label = get<std::string>(n, path, "label");
            if (net.find_node(label)) continue;
            net.add_node(label, parse_kind(get_or<std::string>(n, path, "kind", "plain"), path + ".kind"),
                         get_or(n, path, "weight", w_max));
        }
    }
    if (sc.contains("edges")) {
        for (std::size_t i = 0; i < sc["edges"].size(); ++i) {
            const std::string path = "scenario.edges[" + std::to_string(i) + "]";
            const json& e = sc["edges"][i];
            check_keys(e, path, {"src", "dst", "weight", "back_weight"});
            const NodeId s = lookup_node(net, e, path, "src");
            const NodeId d = lookup_node(net, e, path, "dst");
            if (s == d) throw ConfigError(path + ": self-edge");
            const double w = get<double>(e, path, "weight");
            if (w < 0.0 || w > w_max) throw ConfigError(path + ".weight: must lie in [0, w_max]");
            const auto [f, b] = net.ensure_reciprocal(s, d);
            net.edge(f).weight = w;
            net.edge(b).weight = get_or(e, path, "back_weight", w);
        }
    }
    PathQuery q;
    q.source = lookup_node(net, sc, "scenario", "source");
    q.goal = lookup_node(net, sc, "scenario", "goal");
    if (sc.contains("context")) {
        for (std::size_t i = 0; i < sc["context"].size(); ++i) {
            const json& c = sc["context"][i];
            if (!c.is_string()) throw ConfigError("scenario.context[" + std::to_string(i) + "]: expected a label");
            auto id = net.find_node(c.get<std::string>());
            if (!id) throw ConfigError("scenario.context[" + std::to_string(i) + "]: unknown node");
            q.context.insert(*id);
        }
    }
    const std::string policy = get_or<std::string>(sc, "scenario", "policy", "absolute");
    if (policy != "absolute" && policy != "relative") throw ConfigError("scenario.policy: expected absolute or relative");

    const Plan p = plan(net, q, policy == "absolute" ? Policy::absolute : Policy::relative, cfg.planner);
    std::string decisions = "decisions:";
    for (const auto& d : p.decisions) {
        r.log.push_back({net.tick_count(), d.driven_by_goal ? "decide-goal" : "decide", ElementRef::node(d.chosen).key(),
                         static_cast<double>(d.rounds_used)});
        decisions += " " + label_of(net, d.chosen) + "@" + std::to_string(d.rounds_used);
    }
    std::string actions = "plan:";
    for (NodeId a : p.actions) actions += " " + label_of(net, a);
    r.summary.push_back(actions);
    r.summary.push_back(decisions);
    r.snapshot = take_snapshot(net);
}

void run_hebbian(const ExperimentConfig& cfg, ExperimentResult& r) {
    Network net = build_network(cfg);
    net.attach_log(&r.log);
    const json& sc = cfg.scenario;
    check_keys(sc, "scenario", {"a", "b", "reps", "gap"});
    const NodeId a = ensure_node(net, get<std::string>(sc, "scenario", "a"));
    const NodeId b = ensure_node(net, get<std::string>(sc, "scenario", "b"));
    if (a == b) throw ConfigError("scenario.b: must differ from scenario.a");
    const int reps = get_or(sc, "scenario", "reps", 5);
    const int gap = get_or(sc, "scenario", "gap", 0);
    if (reps < 1) throw ConfigError("scenario.reps: must be >= 1");
    if (gap < 0) throw ConfigError("scenario.gap: must be >= 0");
    int fixated_at = 0;
    for (int i = 0; i < reps; ++i) {
        hebbian_episode(net, a, b, 1, 0);
        if (!fixated_at && net.edge(*net.find_edge(a, b)).fixated) fixated_at = i + 1;
        if (i + 1 < reps) {
            for (int g = 0; g < gap; ++g) net.tick();
        }
    }
    net.attach_log(nullptr);
    r.summary.push_back("weight: " + fmt(net.edge(*net.find_edge(a, b)).weight));
    r.summary.push_back("fixated_at: " + std::to_string(fixated_at));
    r.snapshot = take_snapshot(net);
}

void run_custom(const ExperimentConfig& cfg, ExperimentResult& r) {
    Network net = build_network(cfg);
    net.attach_log(&r.log);
    if (!cfg.steps.is_array()) throw ConfigError("steps: required for custom runs (array)");
    for (std::size_t i = 0; i < cfg.steps.size(); ++i) {
        const std::string path = "steps[" + std::to_string(i) + "]";
        const json& s = cfg.steps[i];
        const std::string op = get<std::string>(s, path, "op");
        if (op == "add_node") {
            check_keys(s, path, {"op", "label", "kind", "weight"});
            net.add_node(get<std::string>(s, path, "label"), parse_kind(get_or<std::string>(s, path, "kind", "plain"), path + ".kind"),
                         get_or(s, path, "weight", 0.0));
        } else if (op == "add_edge") {
            check_keys(s, path, {"op", "src", "dst", "weight"});
            const NodeId a = lookup_node(net, s, path, "src");
            const NodeId b = lookup_node(net, s, path, "dst");
            if (a == b) throw ConfigError(path + ": self-edge");
            net.edge(net.ensure_reciprocal(a, b).first).weight = get_or(s, path, "weight", 0.0);
        } else if (op == "stimulate") {
            check_keys(s, path, {"op", "node", "value"});
            net.stimulate(lookup_node(net, s, path, "node"), Signal::clamped(get_or(s, path, "value", 3)));
        } else if (op == "tick") {
            check_keys(s, path, {"op", "count", "external"});
            std::map<NodeId, Signal> ext;
            if (s.contains("external")) {
                if (!s["external"].is_object()) throw ConfigError(path + ".external: expected {label: value}");
                for (const auto& [label, v] : s["external"].items()) {
                    auto id = net.find_node(label);
                    if (!id || net.node(*id).kind != Kind::sensory) {
                        throw ConfigError(path + ".external." + label + ": not a sensory node");
                    }
                    if (!v.is_number_integer()) throw ConfigError(path + ".external." + label + ": expected an integer");
                    ext[*id] = Signal::clamped(v.get<int>());
                }
            }
            const int count = get_or(s, path, "count", 1);
            for (int t = 0; t < count; ++t) net.tick(ext);
        } else if (op == "hebbian") {
            check_keys(s, path, {"op", "a", "b", "reps", "gap"});
            hebbian_episode(net, lookup_node(net, s, path, "a"), lookup_node(net, s, path, "b"), get_or(s, path, "reps", 1),
                            get_or(s, path, "gap", 0));
        } else if (op == "reinforce") {
            check_keys(s, path, {"op", "stimulus", "reward", "trials"});
            const int trials = get_or(s, path, "trials", 1);
            for (int t = 0; t < trials; ++t) reinforce(net, lookup_node(net, s, path, "stimulus"), lookup_node(net, s, path, "reward"));
        } else if (op == "replay") {
            check_keys(s, path, {"op", "nodes", "salience", "rounds"});
            Episode ep;
            if (!s.contains("nodes") || !s["nodes"].is_array()) throw ConfigError(path + ".nodes: expected an array of labels");
            for (const auto& l : s["nodes"]) {
                auto id = l.is_string() ? net.find_node(l.get<std::string>()) : std::nullopt;
                if (!id) throw ConfigError(path + ".nodes: unknown node");
                ep.nodes.push_back(*id);
            }
            ep.salience = get_or(s, path, "salience", 0.0);
            replay(net, ep, get_or(s, path, "rounds", 1));
        } else if (op == "generalize") {
            check_keys(s, path, {"op", "overlap_min"});
            const auto added = generalize(net, get_or(s, path, "overlap_min", 2));
            for (EdgeId e : added) r.log.push_back({net.tick_count(), "generalize", ElementRef::edge(e).key(), net.edge(e).weight});
        } else if (op == "nightly_reset") {
            check_keys(s, path, {"op"});
            net.nightly_reset();
        } else {
            throw ConfigError(path + ".op: unknown operation '" + op + "'");
        }
    }
    net.attach_log(nullptr);
    std::size_t fixated = 0;
    for (const auto& n : net.nodes()) fixated += n.fixated ? 1 : 0;
    r.summary.push_back("nodes: " + std::to_string(net.nodes().size()) + " fixated: " + std::to_string(fixated));
    r.snapshot = take_snapshot(net);
}

}  // namespace

const char* to_string(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::segment: return "segment";
        case ExperimentKind::predict: return "predict";
        case ExperimentKind::plan: return "plan";
        case ExperimentKind::hebbian: return "hebbian";
        case ExperimentKind::custom: return "custom";
    }
    return "custom";
}

ExperimentConfig parse_config(const json& j, const std::filesystem::path& base_dir) {
    check_keys(j, "", {"version", "kind", "corpus", "params", "chunker", "planner", "innate", "seed", "deterministic",
                       "schedule", "scenario", "steps", "outputs"});
    if (get<int>(j, "", "version") != kConfigVersion) throw ConfigError("version: unsupported (expected 1)");
    ExperimentConfig cfg;
    const std::string kind = get<std::string>(j, "", "kind");
    if (kind == "segment") cfg.kind = ExperimentKind::segment;
    else if (kind == "predict") cfg.kind = ExperimentKind::predict;
    else if (kind == "plan") cfg.kind = ExperimentKind::plan;
    else if (kind == "hebbian") cfg.kind = ExperimentKind::hebbian;
    else if (kind == "custom") cfg.kind = ExperimentKind::custom;
    else throw ConfigError("kind: unknown experiment kind '" + kind + "'");

    if (j.contains("corpus")) {
        cfg.corpus = get<std::string>(j, "", "corpus");
        if (cfg.corpus != "fig1a" && cfg.corpus != "fig1b") {
            const auto p = resolve_path(base_dir, cfg.corpus);
            if (!std::filesystem::exists(p)) throw ConfigError("corpus: file not found: " + p.string());
            cfg.corpus = p.string();
        }
    }
    if (j.contains("params")) {
        try {
            cfg.params = params_from_json(j["params"], cfg.params);
        } catch (const SnapshotError& e) {
            throw ConfigError(e.what());
        }
    }
    cfg.params.deterministic = get_or(j, "", "deterministic", cfg.params.deterministic);
    if (j.contains("chunker")) apply_chunker(j["chunker"], cfg.chunker);
    if (j.contains("planner")) apply_planner(j["planner"], cfg.planner);
    if (j.contains("innate")) cfg.innate = parse_innate(j["innate"]);
    cfg.seed = get_or<std::uint64_t>(j, "", "seed", 0);
    if (j.contains("schedule")) cfg.schedule = j["schedule"];
    if (j.contains("scenario")) cfg.scenario = j["scenario"];
    if (j.contains("steps")) cfg.steps = j["steps"];
    if (j.contains("outputs")) {
        const json& o = j["outputs"];
        check_keys(o, "outputs", {"snapshot", "log", "dot"});
        if (o.contains("snapshot")) cfg.outputs.snapshot = resolve_path(base_dir, get<std::string>(o, "outputs", "snapshot"));
        if (o.contains("log")) cfg.outputs.log = resolve_path(base_dir, get<std::string>(o, "outputs", "log"));
        if (o.contains("dot")) cfg.outputs.dot = resolve_path(base_dir, get<std::string>(o, "outputs", "dot"));
    }
    cfg.chunker.substrate = cfg.params;
    validate(cfg);
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::string text;
    try {
        text = read_text(path);
    } catch (const SnapshotError& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return parse_config(j, path.parent_path());
}

void set_param(ExperimentConfig& cfg, const std::string& name, const json& value) {
    if (name.rfind("chunker.", 0) == 0) {
        apply_chunker(json{{name.substr(8), value}}, cfg.chunker);
    } else if (name.rfind("planner.", 0) == 0) {
        apply_planner(json{{name.substr(8), value}}, cfg.planner);
    } else {
        try {
            cfg.params = params_from_json(json{{name, value}}, cfg.params);
        } catch (const SnapshotError& e) {
            throw ConfigError(e.what());
        }
    }
    cfg.chunker.substrate = cfg.params;
    validate(cfg);
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    validate(cfg);
    ExperimentResult r;
    switch (cfg.kind) {
        case ExperimentKind::segment: run_segment(cfg, r); break;
        case ExperimentKind::predict: run_predict(cfg, r); break;
        case ExperimentKind::plan: run_plan(cfg, r); break;
        case ExperimentKind::hebbian: run_hebbian(cfg, r); break;
        case ExperimentKind::custom: run_custom(cfg, r); break;
    }
    return r;
}

std::string log_text(const EventLog& log) {
    std::string out;
    for (const auto& e : log) out += format_event(e) + "\n";
    return out;
}

void write_outputs(const ExperimentConfig& cfg, const ExperimentResult& r) {
    if (cfg.outputs.snapshot) export_snapshot(r.snapshot, ExportFormat::json, *cfg.outputs.snapshot);
    if (cfg.outputs.dot) export_snapshot(r.snapshot, ExportFormat::dot, *cfg.outputs.dot);
    if (cfg.outputs.log) write_text(*cfg.outputs.log, log_text(r.log));
}

TransducerSpec transducer_spec_from_json(const json& j) {
    check_keys(j, "transducer", {"states", "inputs", "outputs", "rows"});
    TransducerSpec spec;
    auto strings = [&](const char* key, std::set<std::string>& out) {
        if (!j.contains(key) || !j[key].is_array()) throw ConfigError(std::string("transducer.") + key + ": expected an array");
        for (const auto& v : j[key]) {
            if (!v.is_string()) throw ConfigError(std::string("transducer.") + key + ": expected strings");
            out.insert(v.get<std::string>());
        }
    };
    strings("states", spec.states);
    strings("inputs", spec.inputs);
    strings("outputs", spec.outputs);
    if (!j.contains("rows") || !j["rows"].is_array()) throw ConfigError("transducer.rows: expected an array");
    for (std::size_t i = 0; i < j["rows"].size(); ++i) {
        const std::string path = "transducer.rows[" + std::to_string(i) + "]";
        const json& row = j["rows"][i];
        check_keys(row, path, {"state", "input", "outcomes"});
        Distribution d;
        if (!row.contains("outcomes") || !row["outcomes"].is_array()) throw ConfigError(path + ".outcomes: expected an array");
        for (std::size_t k = 0; k < row["outcomes"].size(); ++k) {
            const std::string opath = path + ".outcomes[" + std::to_string(k) + "]";
            const json& o = row["outcomes"][k];
            check_keys(o, opath, {"state", "output", "p"});
            d.entries.push_back({get<std::string>(o, opath, "state"), get<std::string>(o, opath, "output"), get<double>(o, opath, "p")});
        }
        spec.transition[{get<std::string>(row, path, "state"), get<std::string>(row, path, "input")}] = std::move(d);
    }
    return spec;
}

}  // namespace tnet
