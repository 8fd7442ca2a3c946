#pragma once

#include <map>
#include <stdexcept>
#include <string>

#include "tnet/network.hpp"

namespace tnet {

/// Cue/outcome prediction structure. Every motif edge has a reciprocal,
/// so pred_pos also receives an edge from outcome_pos.
struct PredictionMotif {
    NodeId cue;
    NodeId outcome_pos;
    NodeId outcome_neg;
    NodeId pred_pos;
    NodeId pred_neg;

    bool operator==(const PredictionMotif&) const = default;
};

struct ActivationSnapshot {
    std::uint64_t tick = 0;
    std::map<NodeId, double> activation;

    double at(NodeId n) const;
};

class PredictorError : public std::runtime_error {
public:
    enum class Code { UnknownNode, SameNode, ZeroDenominator, InvalidMotif };

    PredictorError(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Code code() const { return code_; }

private:
    Code code_;
};

/// Locates or creates "No-X", "Pred-X" and "Pred-No-X" for outcome label X
/// and all six motif edges.
PredictionMotif build_motif(Network& net, NodeId cue, NodeId outcome_pos);

/// Throws PredictorError(InvalidMotif) if a role repeats or an edge is missing.
void validate_motif(const Network& net, const PredictionMotif& m);

/// Relative prediction minus relative outcome, in [-1, 1].
double prediction_error(const ActivationSnapshot& s1, const ActivationSnapshot& s2, const PredictionMotif& m);

struct TrialResult {
    double error = 0.0;
    ActivationSnapshot s1;
    ActivationSnapshot s2;
    /// Sum of |weight change| over the six motif edges during the trial.
    double weight_change = 0.0;
};

/// Tick offsets relative to cue injection.
inline constexpr int kPredictionTick = 2;
inline constexpr int kOutcomeDeadline = 5;

/// One cue presentation followed by the outcome (or its absence) at the
/// deadline. Before any learning both prediction nodes sit at zero; the
/// trial then reads them as an even split.
TrialResult trial(Network& net, const PredictionMotif& m, bool outcome_present);

}  // namespace tnet
