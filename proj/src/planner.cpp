#include "tnet/planner.hpp"

#include <algorithm>
#include <cmath>

#include "tnet/rng.hpp"

namespace tnet {

namespace {

using Code = PlannerError::Code;

void require(const Network& net, NodeId n) {
    if (!net.has_node(n)) throw PlannerError(Code::UnknownNode, "unknown node n" + std::to_string(n));
}

void require(const Network& net, const PathQuery& q) {
    require(net, q.source);
    require(net, q.goal);
    for (NodeId c : q.context) require(net, c);
}

double norm(double w, const Params& p) { return w / p.w_max; }

bool forward(const EdgeState& e) { return !e.reciprocal && e.weight > 0.0; }

std::map<NodeId, double> forward_level(const Network& net, const PathQuery& q, const PlannerParams& pp) {
    const Params& p = net.params();
    const double s = pp.source_strength / 3.0;
    std::map<NodeId, double> level{{q.source, s}};
    for (NodeId c : q.context) level[c] = std::max(level[c], s);
    for (std::size_t pass = 0; pass < net.nodes().size(); ++pass) {
        bool changed = false;
        for (const auto& e : net.edges()) {
            if (!forward(e)) continue;
            auto it = level.find(e.src);
            if (it == level.end()) continue;
            const double v = it->second * norm(e.weight, p) * norm(net.node(e.dst).weight, p);
            double& dst = level[e.dst];
            if (v > dst) {
                dst = v;
                changed = true;
            }
        }
        if (!changed) break;
    }
    return level;
}

double back_weight(const Network& net, const EdgeState& e, const PlannerParams& pp) {
    if (pp.back_uses_reciprocal_weight) return e.weight;
    auto partner = net.find_edge(e.dst, e.src);
    return partner ? net.edge(*partner).weight : 0.0;
}

double lookup(const std::map<NodeId, double>& m, NodeId n) {
    auto it = m.find(n);
    return it == m.end() ? 0.0 : it->second;
}

NodeId effector_of(const Network& net, NodeId n) {
    NodeId best = n;
    double w = 0.0;
    for (EdgeId e : net.out_edges(n)) {
        const EdgeState& es = net.edge(e);
        if (!forward(es) || net.node(es.dst).kind != Kind::effector) continue;
        if (es.weight > w) {
            w = es.weight;
            best = es.dst;
        }
    }
    return best;
}

}  // namespace

void PlannerParams::validate(const Params& p) const {
    if (!(t_act > 0.0 && t_act <= p.a_max)) throw PlannerError(Code::InvalidParams, "planner.t_act: must lie in (0, a_max]");
    if (!(t_rel > 0.0 && t_rel <= p.a_max)) throw PlannerError(Code::InvalidParams, "planner.t_rel: must lie in (0, a_max]");
    if (max_rounds < 1) throw PlannerError(Code::InvalidParams, "planner.max_rounds: must be >= 1");
    if (source_strength < 1 || source_strength > 3) {
        throw PlannerError(Code::InvalidParams, "planner.source_strength: must be 1, 2 or 3");
    }
    if (!(goal_value > 0.0)) throw PlannerError(Code::InvalidParams, "planner.goal_value: must be positive");
}

double ActivationMap::node(NodeId n) const { return lookup(nodes, n); }

double ActivationMap::edge(EdgeId e) const {
    auto it = edges.find(e);
    return it == edges.end() ? 0.0 : it->second;
}

std::map<NodeId, double> back_value(const Network& net, NodeId goal, const PlannerParams& pp) {
    require(net, goal);
    const Params& p = net.params();
    std::map<NodeId, double> total;
    std::map<NodeId, double> frontier{{goal, pp.goal_value}};
    for (std::size_t depth = 0; depth < net.nodes().size() && !frontier.empty(); ++depth) {
        std::map<NodeId, double> next;
        for (const auto& [y, v] : frontier) {
            for (EdgeId e : net.out_edges(y)) {
                const EdgeState& es = net.edge(e);
                if (!es.reciprocal || es.dst == goal) continue;
                const double w = back_weight(net, es, pp);
                if (w <= 0.0) continue;
                const double add = v * norm(w, p) * norm(net.node(es.dst).weight, p);
                if (add > 0.0) next[es.dst] += add;
            }
        }
        for (const auto& [x, v] : next) total[x] += v;
        frontier = std::move(next);
    }
    return total;
}

ActivationMap propagate(const Network& net, const PathQuery& q, int rounds, const PlannerParams& pp) {
    require(net, q);
    if (rounds < 1) throw PlannerError(Code::InvalidParams, "propagate: rounds must be >= 1");
    const Params& p = net.params();
    const auto level = forward_level(net, q, pp);
    auto back = back_value(net, q.goal, pp);
    back[q.goal] = pp.goal_value;

    ActivationMap out;
    const double r = rounds;
    for (const auto& n : net.nodes()) {
        const double a = std::max(lookup(level, n.id), n.id == q.goal ? pp.goal_value : r * lookup(back, n.id));
        if (a > 0.0) out.nodes[n.id] = std::min(p.a_max, a);
    }
    for (const auto& e : net.edges()) {
        double a = 0.0;
        if (forward(e)) {
            a = lookup(level, e.src) * norm(e.weight, p);
        } else if (e.reciprocal) {
            a = r * lookup(back, e.src) * norm(back_weight(net, e, pp), p);
        }
        if (a > 0.0) out.edges[e.id] = std::min(p.a_max, a);
    }
    return out;
}

std::vector<NodeId> candidates(const Network& net, NodeId source) {
    require(net, source);
    std::vector<NodeId> out;
    for (EdgeId e : net.out_edges(source)) {
        const EdgeState& es = net.edge(e);
        if (forward(es) && net.node(es.dst).kind != Kind::effector) out.push_back(es.dst);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::optional<Decision> decide(const Network& net, const PathQuery& q, Policy policy, const PlannerParams& pp) {
    require(net, q);
    const Params& p = net.params();
    pp.validate(p);
    const auto cands = candidates(net, q.source);
    if (cands.empty()) throw PlannerError(Code::NoCandidates, "source has no forward out-edges");

    const double s = pp.source_strength / 3.0;
    auto back = back_value(net, q.goal, pp);
    back[q.goal] = pp.goal_value;

    struct Cand {
        NodeId id;
        double fwd;
        double prior;
        double inc;
        double act = 0.0;
    };
    std::vector<Cand> cs;
    bool any_growth = false;
    for (NodeId c : cands) {
        const EdgeState& out = net.edge(*net.find_edge(q.source, c));
        double prior = out.activation;
        double inc = 0.0;
        if (auto ret = net.find_edge(c, q.source)) {
            const EdgeState& re = net.edge(*ret);
            prior = std::max(prior, re.activation);
            if (re.reciprocal) inc = lookup(back, c) * norm(back_weight(net, re, pp), p);
        }
        cs.push_back({c, s * norm(out.weight, p), prior, inc});
        any_growth = any_growth || inc > 0.0;
    }

    auto better = [](const Cand& x, const Cand& y) {
        if (x.act != y.act) return x.act > y.act;
        return x.inc > y.inc;
    };
    auto tied = [](const Cand& x, const Cand& y) { return x.act == y.act && x.inc == y.inc; };

    auto act_at = [&](const Cand& c, long long r) {
        return std::min(p.a_max, std::max(c.fwd, c.prior + static_cast<double>(r) * c.inc));
    };
    // Ranks the candidates after r passes; returns a decision if the policy fires.
    auto evaluate = [&](long long r, bool& fired) -> std::optional<Decision> {
        for (auto& c : cs) c.act = act_at(c, r);
        std::vector<Cand> ranked = cs;
        std::stable_sort(ranked.begin(), ranked.end(), better);
        std::size_t n_tied = 1;
        while (n_tied < ranked.size() && tied(ranked[0], ranked[n_tied])) ++n_tied;
        if (policy == Policy::absolute) {
            fired = ranked[0].act >= pp.t_act;
        } else {
            const double second = ranked.size() > 1 ? ranked[1].act : 0.0;
            fired = ranked[0].act - second >= pp.t_rel;
            n_tied = 1;
        }
        if (!fired) return std::nullopt;
        std::size_t pick = 0;
        if (n_tied > 1) {
            if (p.deterministic) return std::nullopt;
            const double u = Rng::keyed(net.seed(), q.source, static_cast<std::uint64_t>(r));
            pick = std::min(n_tied - 1, static_cast<std::size_t>(u * static_cast<double>(n_tied)));
        }
        const Cand& c = ranked[pick];
        return Decision{c.id, static_cast<int>(r), c.act, c.inc > 0.0 && c.prior + static_cast<double>(r) * c.inc >= c.fwd};
    };

    bool fired = false;
    if (policy == Policy::absolute) {
        // Activations only grow, so the first pass at which any candidate
        // reaches t_act can be found per candidate without stepping.
        long long first = -1;
        for (const auto& c : cs) {
            long long r = 1;
            if (act_at(c, 1) < pp.t_act) {
                if (c.inc <= 0.0) continue;
                r = std::max(1LL, static_cast<long long>(std::ceil((pp.t_act - c.prior) / c.inc)));
                while (r > 1 && act_at(c, r - 1) >= pp.t_act) --r;
                while (act_at(c, r) < pp.t_act) {
                    if (r > pp.max_rounds) break;
                    ++r;
                }
            }
            if (first < 0 || r < first) first = r;
        }
        if (first < 0 || first > pp.max_rounds) return std::nullopt;
        return evaluate(first, fired);
    }
    for (long long r = 1; r <= pp.max_rounds; ++r) {
        auto d = evaluate(r, fired);
        if (fired) return d;
        bool saturated = true;
        for (const auto& c : cs) saturated = saturated && (c.inc <= 0.0 || c.prior + static_cast<double>(r) * c.inc >= p.a_max);
        if (!any_growth || saturated) break;
    }
    return std::nullopt;
}

Plan plan(const Network& net, const PathQuery& q, Policy policy, const PlannerParams& pp) {
    require(net, q);
    Plan out;
    if (q.source == q.goal) {
        out.reached_goal = true;
        return out;
    }
    std::set<NodeId> visited{q.source};
    PathQuery step = q;
    while (true) {
        if (candidates(net, step.source).empty()) break;
        const auto d = decide(net, step, policy, pp);
        if (!d || visited.count(d->chosen)) break;
        out.decisions.push_back(*d);
        const NodeId eff = effector_of(net, d->chosen);
        if (eff != d->chosen) out.actions.push_back(eff);
        if (d->chosen == q.goal) {
            out.reached_goal = true;
            break;
        }
        visited.insert(d->chosen);
        step.source = d->chosen;
    }
    if (!out.reached_goal) out.actions.clear();
    return out;
}

std::vector<EdgeId> generalize(Network& net, int overlap_min) {
    if (overlap_min < 2) throw PlannerError(Code::InvalidParams, "generalize: overlap_min must be >= 2");
    const Params& p = net.params();
    std::vector<EdgeId> added;
    for (bool changed = true; changed;) {
        changed = false;
        std::vector<std::set<NodeId>> outs(net.nodes().size());
        for (const auto& e : net.edges()) {
            if (forward(e)) outs[e.src].insert(e.dst);
        }
        for (NodeId a = 0; a < outs.size() && !changed; ++a) {
            for (NodeId b = 0; b < outs.size() && !changed; ++b) {
                if (a == b) continue;
                int shared = 0;
                for (NodeId x : outs[a]) shared += outs[b].count(x) ? 1 : 0;
                if (shared < overlap_min) continue;
                for (NodeId x : outs[a]) {
                    if (x == b || outs[b].count(x)) continue;
                    if (auto existing = net.find_edge(b, x); existing && net.edge(*existing).reciprocal) continue;
                    const auto [f, back] = net.ensure_reciprocal(b, x);
                    net.edge(f).weight = p.dw;
                    if (net.edge(back).weight <= 0.0) net.edge(back).weight = p.dw;
                    added.push_back(f);
                    changed = true;
                }
            }
        }
    }
    return added;
}

double causal_strength(const Network& net, NodeId action, NodeId variant, NodeId outcome) {
    require(net, action);
    require(net, variant);
    require(net, outcome);
    const Params& p = net.params();
    auto w = [&](NodeId s) {
        auto e = net.find_edge(s, outcome);
        return e ? net.edge(*e).weight : 0.0;
    };
    return norm(w(action), p) - norm(w(variant), p);
}

}  // namespace tnet
