#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "tnet/network.hpp"

namespace tnet {

struct InnateNode {
    std::string label;
    Kind kind = Kind::plain;
    double weight = 0.0;
};

struct InnateEdge {
    std::string src;
    std::string dst;
    double weight = 0.0;
};

struct RewardBinding {
    std::string reward;
    std::string effector;
};

/// Pre-wired structure present before any experience.
struct InnateSpec {
    std::vector<InnateNode> nodes;
    std::vector<InnateEdge> edges;
    std::vector<RewardBinding> reward_bindings;
};

/// Node sequence active within one working-memory span.
struct Episode {
    std::vector<NodeId> nodes;
    double salience = 0.0;
};

class LearningError : public std::runtime_error {
public:
    enum class Code { DuplicateLabel, DanglingEdge, BelowThreshold, BadBinding, NotARewardNode, SelfEdge, UnknownNode, InvalidCount };

    LearningError(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Code code() const { return code_; }

private:
    Code code_;
};

/// Adds the innate elements, all fixated. Validation happens before any
/// mutation, so a failed call leaves the network untouched.
void inject_innate(Network& net, const InnateSpec& spec);

/// Co-activates a and b `reps` times, `gap_ticks` silent ticks apart.
void hebbian_episode(Network& net, NodeId a, NodeId b, int reps, int gap_ticks);

/// One supervised trial pairing `stimulus` with a reward node. The
/// stimulus->reward increment is boosted when the reward is fixated.
void reinforce(Network& net, NodeId stimulus, NodeId reward);

/// Internal re-activation of an episode `rounds` times within one tick.
/// A cyclic episode (first == last) then free-runs its loop signal.
void replay(Network& net, const Episode& episode, int rounds);

/// Free-run length used by replay for cyclic episodes.
inline constexpr int kReplayLoopTicks = 32;

/// Smallest cue strength in 1..3 that lifts `n` to the deterministic
/// firing threshold, or 4 if none does.
int min_cue_to_fire(const Network& net, NodeId n);

}  // namespace tnet
