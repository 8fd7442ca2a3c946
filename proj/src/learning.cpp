#include "tnet/learning.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>

namespace tnet {

namespace {

using Code = LearningError::Code;

void require_node(const Network& net, NodeId n) {
    if (!net.has_node(n)) throw LearningError(Code::UnknownNode, "unknown node n" + std::to_string(n));
}

}  // namespace

void inject_innate(Network& net, const InnateSpec& spec) {
    const Params& p = net.params();
    std::map<std::string, Kind> declared;
    for (const auto& n : spec.nodes) {
        if (n.label.empty()) throw LearningError(Code::DuplicateLabel, "innate node without label");
        if (declared.count(n.label) || net.find_node(n.label)) {
            throw LearningError(Code::DuplicateLabel, "duplicate label '" + n.label + "'");
        }
        if (n.weight < p.theta || n.weight > p.w_max) {
            throw LearningError(Code::BelowThreshold, "innate node '" + n.label + "' weight outside [theta, w_max]");
        }
        declared.emplace(n.label, n.kind);
    }
    auto kind_of = [&](const std::string& label) -> std::optional<Kind> {
        if (auto it = declared.find(label); it != declared.end()) return it->second;
        if (auto id = net.find_node(label)) return net.node(*id).kind;
        return std::nullopt;
    };
    for (const auto& e : spec.edges) {
        if (!kind_of(e.src) || !kind_of(e.dst)) {
            throw LearningError(Code::DanglingEdge, "edge " + e.src + "->" + e.dst + " references an undeclared label");
        }
        if (e.src == e.dst) throw LearningError(Code::SelfEdge, "innate self-edge on '" + e.src + "'");
        if (e.weight < p.theta || e.weight > p.w_max) {
            throw LearningError(Code::BelowThreshold, "innate edge " + e.src + "->" + e.dst + " weight outside [theta, w_max]");
        }
    }
    for (const auto& b : spec.reward_bindings) {
        auto rk = kind_of(b.reward);
        auto ek = kind_of(b.effector);
        if (!rk || !ek) throw LearningError(Code::DanglingEdge, "binding " + b.reward + "->" + b.effector + " references an undeclared label");
        if (*rk != Kind::reward || *ek != Kind::effector) {
            throw LearningError(Code::BadBinding, "binding " + b.reward + "->" + b.effector + " must join a reward to an effector");
        }
    }

    for (const auto& n : spec.nodes) net.add_node(n.label, n.kind, n.weight);
    auto wire = [&](NodeId s, NodeId d, double w) {
        auto [f, back] = net.ensure_reciprocal(s, d);
        EdgeState& e = net.edge(f);
        e.weight = std::max(e.weight, w);
        e.fixated = e.fixated || e.weight >= p.theta;
        (void)back;
    };
    for (const auto& e : spec.edges) wire(net.node_id(e.src), net.node_id(e.dst), e.weight);
    for (const auto& b : spec.reward_bindings) {
        const NodeId r = net.node_id(b.reward);
        const NodeId f = net.node_id(b.effector);
        if (!net.find_edge(r, f) || net.edge(*net.find_edge(r, f)).weight < p.theta) wire(r, f, p.theta);
    }
}

void hebbian_episode(Network& net, NodeId a, NodeId b, int reps, int gap_ticks) {
    require_node(net, a);
    require_node(net, b);
    if (a == b) throw LearningError(Code::SelfEdge, "hebbian_episode on a single node");
    if (reps < 1) throw LearningError(Code::InvalidCount, "reps must be >= 1");
    if (gap_ticks < 0) throw LearningError(Code::InvalidCount, "gap_ticks must be >= 0");
    const auto [ab, ba] = net.ensure_reciprocal(a, b);
    for (int r = 0; r < reps; ++r) {
        net.stimulate(a, Signal{3});
        net.stimulate(b, Signal{3});
        net.reinforce(ElementRef::edge(ab));
        net.reinforce(ElementRef::edge(ba));
        net.tick();
        if (r + 1 < reps) {
            for (int g = 0; g < gap_ticks; ++g) net.tick();
        }
    }
}

void reinforce(Network& net, NodeId stimulus, NodeId reward) {
    require_node(net, stimulus);
    require_node(net, reward);
    if (net.node(reward).kind != Kind::reward) {
        throw LearningError(Code::NotARewardNode, "n" + std::to_string(reward) + " is not a reward node");
    }
    if (stimulus == reward) throw LearningError(Code::SelfEdge, "stimulus equals reward");
    const bool strong = net.node(reward).fixated;
    const auto [sr, rs] = net.ensure_reciprocal(stimulus, reward);
    net.stimulate(stimulus, Signal{3});
    net.stimulate(reward, Signal{3});
    net.reinforce(ElementRef::edge(sr), strong);
    net.reinforce(ElementRef::edge(rs));
    net.tick();
}

void replay(Network& net, const Episode& episode, int rounds) {
    if (episode.nodes.empty()) throw LearningError(Code::InvalidCount, "empty episode");
    if (rounds < 1) throw LearningError(Code::InvalidCount, "rounds must be >= 1");
    for (NodeId n : episode.nodes) require_node(net, n);
    const Params& p = net.params();
    const bool salient = episode.salience >= 0.5;

    std::vector<EdgeId> hops;
    for (std::size_t i = 0; i + 1 < episode.nodes.size(); ++i) {
        const NodeId u = episode.nodes[i];
        const NodeId v = episode.nodes[i + 1];
        if (u == v) continue;
        hops.push_back(net.ensure_reciprocal(u, v).first);
    }
    std::set<NodeId> distinct(episode.nodes.begin(), episode.nodes.end());
    for (int r = 0; r < rounds; ++r) {
        for (NodeId n : distinct) {
            net.reinforce(ElementRef::node(n), salient);
            NodeState& ns = net.node(n);
            ns.activation = std::min(p.a_max, ns.activation + activation_delta(3, ns.weight, p));
        }
        for (EdgeId e : hops) net.reinforce(ElementRef::edge(e), salient);
    }

    const bool cyclic = episode.nodes.size() >= 3 && episode.nodes.front() == episode.nodes.back() && !hops.empty();
    if (!cyclic) {
        net.tick();
        return;
    }
    net.inject(hops.front(), Signal{3});
    for (int t = 0; t < kReplayLoopTicks; ++t) net.tick();
}

int min_cue_to_fire(const Network& net, NodeId n) {
    const NodeState& ns = net.node(n);
    const Params& p = net.params();
    for (int v = 1; v <= 3; ++v) {
        const double a = std::min(p.a_max, ns.activation + activation_delta(v, ns.weight, p));
        if (a >= p.fire_threshold_det) return v;
    }
    return 4;
}

}  // namespace tnet
