#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "tnet/network.hpp"

namespace tnet {

struct PlannerParams {
    double t_act = 0.6;
    double t_rel = 0.15;
    int max_rounds = 50;
    int source_strength = 3;
    double goal_value = 1.0;
    /// Back passes weigh each hop by the reciprocal edge's own weight;
    /// when false they reuse the forward partner's weight.
    bool back_uses_reciprocal_weight = true;

    void validate(const Params& p) const;
};

struct PathQuery {
    NodeId source = 0;
    NodeId goal = 0;
    std::set<NodeId> context;
};

class PlannerError : public std::runtime_error {
public:
    enum class Code { UnknownNode, NoCandidates, InvalidParams };

    PlannerError(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Code code() const { return code_; }

private:
    Code code_;
};

struct ActivationMap {
    std::map<NodeId, double> nodes;
    std::map<EdgeId, double> edges;

    double node(NodeId n) const;
    double edge(EdgeId e) const;
};

/// Forward priming spreads from the source and context nodes as a level
/// set (the strongest route wins); each backward pass from the goal adds
/// the summed value of all goal-reaching routes onto reciprocal edges and
/// nodes. A hop multiplies by w(edge)/w_max, then by w(node)/w_max.
ActivationMap propagate(const Network& net, const PathQuery& q, int rounds, const PlannerParams& pp);

/// Summed back-pass value arriving at each node per round, goal excluded.
std::map<NodeId, double> back_value(const Network& net, NodeId goal, const PlannerParams& pp);

enum class Policy { absolute, relative };

struct Decision {
    NodeId chosen = 0;
    int rounds_used = 0;
    double activation = 0.0;
    /// True when the goal's back passes, not forward priming, carried the
    /// chosen candidate over threshold.
    bool driven_by_goal = false;
};

/// Candidates are the non-effector forward out-neighbours of the source.
/// A candidate's activation starts from the current activation of its
/// link with the source, so pre-activated competitors interfere.
std::optional<Decision> decide(const Network& net, const PathQuery& q, Policy policy, const PlannerParams& pp);

std::vector<NodeId> candidates(const Network& net, NodeId source);

struct Plan {
    std::vector<NodeId> actions;
    std::vector<Decision> decisions;
    bool reached_goal = false;
};

/// Greedy hop commitment. Each committed hop contributes its effector
/// out-neighbour; reaching the goal appends the goal's effector. A search
/// that stalls before the goal yields no actions.
Plan plan(const Network& net, const PathQuery& q, Policy policy, const PlannerParams& pp);

/// Adds B->X for nodes A, B sharing >= overlap_min forward out-neighbours
/// when A->X exists and B->X does not. Repeats until nothing changes.
std::vector<EdgeId> generalize(Network& net, int overlap_min);

/// w(action->outcome)/w_max - w(variant->outcome)/w_max.
double causal_strength(const Network& net, NodeId action, NodeId variant, NodeId outcome);

}  // namespace tnet
