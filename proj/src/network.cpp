#include "tnet/network.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "tnet/rng.hpp"

namespace tnet {

namespace {

constexpr double kFlush = 1e-12;

int clamp_signal(int v) { return std::clamp(v, -3, 3); }

void require(bool ok, const char* field, const char* rule) {
    if (!ok) {
        throw NetworkError(NetworkError::Code::InvalidParams, std::string("params.") + field + ": " + rule);
    }
}

bool open_unit(double x) { return x > 0.0 && x < 1.0; }

}  // namespace

const char* to_string(Kind k) {
    switch (k) {
        case Kind::sensory: return "sensory";
        case Kind::reward: return "reward";
        case Kind::effector: return "effector";
        case Kind::chunk: return "chunk";
        case Kind::plain: return "plain";
    }
    return "plain";
}

Kind kind_from_string(std::string_view s) {
    if (s == "sensory") return Kind::sensory;
    if (s == "reward") return Kind::reward;
    if (s == "effector") return Kind::effector;
    if (s == "chunk") return Kind::chunk;
    if (s == "plain") return Kind::plain;
    throw NetworkError(NetworkError::Code::InvalidParams, "unknown node kind '" + std::string(s) + "'");
}

void Params::validate() const {
    require(dw > 0, "dw", "must be > 0");
    require(decay_w > 0, "decay_w", "must be > 0");
    require(theta > 0, "theta", "must be > 0");
    require(w_max > 0, "w_max", "must be > 0");
    require(theta <= w_max, "theta", "must not exceed w_max");
    require(a_max > 0, "a_max", "must be > 0");
    require(open_unit(decay_a), "decay_a", "must lie in (0,1)");
    require(open_unit(beta), "beta", "must lie in (0,1)");
    require(open_unit(back_factor), "back_factor", "must lie in (0,1)");
    require(open_unit(reset_factor), "reset_factor", "must lie in (0,1)");
    require(fire_threshold_det > 0 && fire_threshold_det <= 1, "fire_threshold_det", "must lie in (0,1]");
    require(boost > 0, "boost", "must be > 0");
    require(act_base > 0, "act_base", "must be > 0");
    require(act_gain > 0, "act_gain", "must be > 0");
}

Signal Signal::clamped(int v) { return Signal{clamp_signal(v)}; }

std::string ElementRef::key() const {
    return (type == Type::node ? "n" : "e") + std::to_string(id);
}

std::string format_event(const Event& e) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", e.value);
    return std::to_string(e.tick) + " " + e.kind + " " + e.element + " " + buf;
}

double update_weight(ElementState& e, const Params& p, bool boosted) {
    if (e.weight < p.theta) {
        e.weight += p.dw * (boosted ? p.boost : 1.0);
    } else {
        e.weight += p.dw * std::pow(p.beta, e.k);
        ++e.k;
    }
    e.weight = std::min(e.weight, p.w_max);
    if (e.weight >= p.theta) e.fixated = true;
    return e.weight;
}

Signal signal_out(const ElementState& e, Signal in, const Params& p) {
    if (in.value == 0) return {};
    const double mag = in.magnitude() * (0.5 + 0.5 * e.weight / p.w_max) * (0.5 + 0.5 * e.activation / p.a_max);
    const int q = std::clamp(static_cast<int>(std::floor(mag + 0.5)), 1, 3);
    return Signal{in.value < 0 ? -q : q};
}

Signal back_signal(Signal forward, const Params& p) {
    const int q = static_cast<int>(std::floor(forward.magnitude() * p.back_factor));
    return Signal{forward.value < 0 ? -q : q};
}

double activation_delta(int v, double w, const Params& p) {
    return v * (p.act_base + p.act_gain * w / p.w_max) / 3.0;
}

Network::Network(Params params, std::uint64_t seed) : params_(params), seed_(seed) { params_.validate(); }

void Network::set_params(const Params& p) {
    p.validate();
    params_ = p;
}

NetworkError Network::unknown_node(NodeId n) const {
    return NetworkError(NetworkError::Code::UnknownNode, "unknown node n" + std::to_string(n));
}

void Network::grow_marks() {
    node_observed_.resize(nodes_.size(), 0);
    node_reinforced_.resize(nodes_.size(), 0);
    edge_observed_.resize(edges_.size(), 0);
    edge_reinforced_.resize(edges_.size(), 0);
}

NodeId Network::add_node(std::string label, Kind kind, double weight) {
    if (!label.empty() && label_index_.count(label)) {
        throw NetworkError(NetworkError::Code::DuplicateLabel, "duplicate label '" + label + "'");
    }
    NodeState n;
    n.id = static_cast<NodeId>(nodes_.size());
    n.label = std::move(label);
    n.kind = kind;
    n.weight = std::clamp(weight, 0.0, params_.w_max);
    n.fixated = n.weight >= params_.theta;
    if (!n.label.empty()) label_index_.emplace(n.label, n.id);
    nodes_.push_back(std::move(n));
    out_.emplace_back();
    in_.emplace_back();
    grow_marks();
    return nodes_.back().id;
}

EdgeId Network::add_edge(NodeId src, NodeId dst, double weight, bool reciprocal) {
    if (!has_node(src)) throw unknown_node(src);
    if (!has_node(dst)) throw unknown_node(dst);
    if (src == dst) throw NetworkError(NetworkError::Code::SelfEdge, "self-edge on n" + std::to_string(src));
    if (auto existing = find_edge(src, dst)) return *existing;
    EdgeState e;
    e.id = static_cast<EdgeId>(edges_.size());
    e.src = src;
    e.dst = dst;
    e.weight = std::clamp(weight, 0.0, params_.w_max);
    e.fixated = e.weight >= params_.theta;
    e.reciprocal = reciprocal;
    edges_.push_back(e);
    out_[src].push_back(e.id);
    in_[dst].push_back(e.id);
    edge_index_.emplace(std::make_pair(src, dst), e.id);
    grow_marks();
    return e.id;
}

std::pair<EdgeId, EdgeId> Network::ensure_reciprocal(NodeId src, NodeId dst) {
    if (!has_node(src)) throw unknown_node(src);
    if (!has_node(dst)) throw unknown_node(dst);
    auto fwd = find_edge(src, dst);
    EdgeId f = fwd ? *fwd : add_edge(src, dst, 0.0, false);
    auto back = find_edge(dst, src);
    EdgeId b = back ? *back : add_edge(dst, src, 0.0, true);
    return {f, b};
}

std::optional<NodeId> Network::find_node(std::string_view label) const {
    auto it = label_index_.find(std::string(label));
    if (it == label_index_.end()) return std::nullopt;
    return it->second;
}

NodeId Network::node_id(std::string_view label) const {
    if (auto n = find_node(label)) return *n;
    throw NetworkError(NetworkError::Code::UnknownNode, "unknown label '" + std::string(label) + "'");
}

std::optional<EdgeId> Network::find_edge(NodeId src, NodeId dst) const {
    auto it = edge_index_.find({src, dst});
    if (it == edge_index_.end()) return std::nullopt;
    return it->second;
}

const NodeState& Network::node(NodeId n) const {
    if (!has_node(n)) throw unknown_node(n);
    return nodes_[n];
}

NodeState& Network::node(NodeId n) {
    if (!has_node(n)) throw unknown_node(n);
    return nodes_[n];
}

const EdgeState& Network::edge(EdgeId e) const {
    if (e >= edges_.size()) throw NetworkError(NetworkError::Code::UnknownEdge, "unknown edge e" + std::to_string(e));
    return edges_[e];
}

EdgeState& Network::edge(EdgeId e) {
    if (e >= edges_.size()) throw NetworkError(NetworkError::Code::UnknownEdge, "unknown edge e" + std::to_string(e));
    return edges_[e];
}

ElementState& Network::element(ElementRef r) {
    if (r.type == ElementRef::Type::node) return node(r.id);
    return edge(r.id);
}

const ElementState& Network::element(ElementRef r) const {
    if (r.type == ElementRef::Type::node) return node(r.id);
    return edge(r.id);
}

const std::vector<EdgeId>& Network::out_edges(NodeId n) const {
    if (!has_node(n)) throw unknown_node(n);
    return out_[n];
}

const std::vector<EdgeId>& Network::in_edges(NodeId n) const {
    if (!has_node(n)) throw unknown_node(n);
    return in_[n];
}

void Network::stimulate(NodeId n, Signal s) {
    if (!has_node(n)) throw unknown_node(n);
    stimuli_[n] += s.value;
}

void Network::inject(EdgeId e, Signal s) {
    edge(e);
    if (s.value != 0) pending_.push_back({e, s.value, false});
}

double Network::reinforce(ElementRef r, bool boosted) {
    ElementState& e = element(r);
    update_weight(e, params_, boosted);
    mark_observed(r);
    if (r.type == ElementRef::Type::node) {
        node_reinforced_[r.id] = 1;
    } else {
        edge_reinforced_[r.id] = 1;
    }
    return e.weight;
}

void Network::mark_observed(ElementRef r) {
    element(r);
    if (r.type == ElementRef::Type::node) {
        node_observed_[r.id] = 1;
    } else {
        edge_observed_[r.id] = 1;
    }
}

EventLog Network::tick(const std::map<NodeId, Signal>& external) {
    for (const auto& [n, s] : external) {
        if (!has_node(n) || nodes_[n].kind != Kind::sensory) {
            throw NetworkError(NetworkError::Code::UnknownNode, "external input to non-sensory or unknown node n" + std::to_string(n));
        }
    }
    const std::uint64_t t = tick_count_;
    const Params& p = params_;
    EventLog log;

    std::vector<double> node_before(nodes_.size());
    std::vector<double> edge_before(edges_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) node_before[i] = nodes_[i].activation;
    for (std::size_t i = 0; i < edges_.size(); ++i) edge_before[i] = edges_[i].activation;

    // Phase 1: external input, internal drive and last tick's relays.
    std::vector<int> input(nodes_.size(), 0);
    std::vector<int> carried(edges_.size(), 0);
    std::vector<Pending> next;
    for (const auto& [n, s] : external) input[n] += s.value;
    for (const auto& [n, v] : stimuli_) input[n] += v;
    stimuli_.clear();
    std::vector<Pending> arriving;
    arriving.swap(pending_);
    for (const auto& d : arriving) {
        const EdgeState& e = edges_[d.edge];
        input[e.dst] += d.value;
        if (auto r = find_edge(e.dst, e.src)) {
            const Signal b = back_signal(Signal{d.value}, p);
            if (b.value != 0) {
                EdgeState& re = edges_[*r];
                re.activation = std::clamp(re.activation + activation_delta(b.value, re.weight, p), 0.0, p.a_max);
                next.push_back({*r, b.value, true});
                log.push_back({t, "echo", ElementRef::edge(*r).key(), static_cast<double>(b.value)});
            }
        }
    }
    for (std::size_t n = 0; n < nodes_.size(); ++n) {
        if (input[n] == 0) continue;
        const int v = clamp_signal(input[n]);
        NodeState& ns = nodes_[n];
        ns.activation = std::clamp(ns.activation + activation_delta(v, ns.weight, p), 0.0, p.a_max);
    }

    // Phase 2: firing.
    for (std::size_t n = 0; n < nodes_.size(); ++n) {
        NodeState& ns = nodes_[n];
        if (ns.activation <= 0.0 || input[n] < 0) continue;
        const bool fires = p.deterministic ? ns.activation >= p.fire_threshold_det
                                           : Rng::keyed(seed_, n, t) < ns.activation;
        if (!fires) continue;
        const Signal strength{input[n] > 0 ? clamp_signal(input[n]) : 1};
        const Signal out = signal_out(ns, strength, p);
        log.push_back({t, "fire", ElementRef::node(ns.id).key(), static_cast<double>(out.value)});
        for (EdgeId e : out_[n]) carried[e] += out.value;
    }

    // Phase 3: edges relay what they carry; delivery happens next tick.
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        if (carried[i] == 0) continue;
        EdgeState& e = edges_[i];
        const Signal v = Signal::clamped(carried[i]);
        e.activation = std::clamp(e.activation + activation_delta(v.value, e.weight, p), 0.0, p.a_max);
        const Signal out = signal_out(e, v, p);
        next.push_back({e.id, out.value, false});
        log.push_back({t, "relay", ElementRef::edge(e.id).key(), static_cast<double>(out.value)});
    }

    // Phase 4: activation-driven weight updates.
    for (std::size_t n = 0; n < nodes_.size(); ++n) {
        NodeState& ns = nodes_[n];
        if (!ns.plastic || ns.activation <= node_before[n]) continue;
        node_observed_[n] = 1;
        if (node_reinforced_[n]) continue;
        update_weight(ns, p);
        log.push_back({t, "update", ElementRef::node(ns.id).key(), ns.weight});
    }
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        EdgeState& e = edges_[i];
        if (!e.plastic || e.activation <= edge_before[i]) continue;
        edge_observed_[i] = 1;
        if (edge_reinforced_[i]) continue;
        update_weight(e, p);
        log.push_back({t, "update", ElementRef::edge(e.id).key(), e.weight});
    }

    // Phase 5: decay.
    apply_decay();
    pending_ = std::move(next);
    ++tick_count_;
    if (sink_) sink_->insert(sink_->end(), log.begin(), log.end());
    return log;
}

void Network::apply_decay() {
    const Params& p = params_;
    auto decay = [&](ElementState& e, char& observed, char& reinforced) {
        if (!e.fixated && !observed && e.weight > 0.0) {
            e.weight -= p.decay_w;
            if (e.weight < kFlush) e.weight = 0.0;
        }
        e.activation *= (1.0 - p.decay_a);
        if (e.activation < kFlush) e.activation = 0.0;
        observed = 0;
        reinforced = 0;
    };
    for (std::size_t i = 0; i < nodes_.size(); ++i) decay(nodes_[i], node_observed_[i], node_reinforced_[i]);
    for (std::size_t i = 0; i < edges_.size(); ++i) decay(edges_[i], edge_observed_[i], edge_reinforced_[i]);
}

void Network::nightly_reset() {
    auto reset = [&](ElementState& e) {
        if (e.fixated && e.weight > params_.theta) {
            e.weight -= (e.weight - params_.theta) * params_.reset_factor;
            e.weight = std::max(e.weight, params_.theta);
        }
        e.k = 0;
    };
    for (auto& n : nodes_) reset(n);
    for (auto& e : edges_) reset(e);
}

bool Network::operator==(const Network& o) const {
    return params_ == o.params_ && seed_ == o.seed_ && tick_count_ == o.tick_count_ && nodes_ == o.nodes_ &&
           edges_ == o.edges_;
}

}  // namespace tnet
