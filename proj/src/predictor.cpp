#include "tnet/predictor.hpp"

#include <array>
#include <cmath>

namespace tnet {

namespace {

using Code = PredictorError::Code;

std::array<std::pair<NodeId, NodeId>, 6> motif_edges(const PredictionMotif& m) {
    return {{{m.cue, m.pred_pos},
             {m.cue, m.pred_neg},
             {m.pred_pos, m.outcome_pos},
             {m.pred_pos, m.outcome_neg},
             {m.pred_neg, m.outcome_neg},
             {m.pred_neg, m.outcome_pos}}};
}

NodeId locate(Network& net, const std::string& label) {
    if (auto id = net.find_node(label)) return *id;
    return net.add_node(label, Kind::plain);
}

double ratio(double pos, double neg) { return pos / (pos + neg); }

}  // namespace

double ActivationSnapshot::at(NodeId n) const {
    auto it = activation.find(n);
    if (it == activation.end()) {
        throw PredictorError(Code::UnknownNode, "snapshot lacks n" + std::to_string(n));
    }
    return it->second;
}

PredictionMotif build_motif(Network& net, NodeId cue, NodeId outcome_pos) {
    if (!net.has_node(cue)) throw PredictorError(Code::UnknownNode, "unknown cue n" + std::to_string(cue));
    if (!net.has_node(outcome_pos)) {
        throw PredictorError(Code::UnknownNode, "unknown outcome n" + std::to_string(outcome_pos));
    }
    if (cue == outcome_pos) throw PredictorError(Code::SameNode, "cue and outcome must differ");
    const NodeState& o = net.node(outcome_pos);
    const std::string x = o.label.empty() ? "n" + std::to_string(o.id) : o.label;
    PredictionMotif m{cue, outcome_pos, locate(net, "No-" + x), locate(net, "Pred-" + x), locate(net, "Pred-No-" + x)};
    for (const auto& [s, d] : motif_edges(m)) {
        const auto [f, b] = net.ensure_reciprocal(s, d);
        net.edge(f).plastic = false;
        net.edge(b).plastic = false;
    }
    validate_motif(net, m);
    return m;
}

void validate_motif(const Network& net, const PredictionMotif& m) {
    const std::array<NodeId, 5> roles{m.cue, m.outcome_pos, m.outcome_neg, m.pred_pos, m.pred_neg};
    for (std::size_t i = 0; i < roles.size(); ++i) {
        if (!net.has_node(roles[i])) throw PredictorError(Code::UnknownNode, "unknown motif node");
        for (std::size_t j = i + 1; j < roles.size(); ++j) {
            if (roles[i] == roles[j]) throw PredictorError(Code::InvalidMotif, "motif roles must be distinct");
        }
    }
    for (const auto& [s, d] : motif_edges(m)) {
        if (!net.find_edge(s, d)) throw PredictorError(Code::InvalidMotif, "motif edge missing");
    }
    if (!net.find_edge(m.outcome_pos, m.pred_pos)) throw PredictorError(Code::InvalidMotif, "outcome->pred edge missing");
}

double prediction_error(const ActivationSnapshot& s1, const ActivationSnapshot& s2, const PredictionMotif& m) {
    const double pp = s1.at(m.pred_pos);
    const double pn = s1.at(m.pred_neg);
    const double op = s2.at(m.outcome_pos);
    const double on = s2.at(m.outcome_neg);
    if (pp + pn <= 0.0) throw PredictorError(Code::ZeroDenominator, "prediction activations are all zero");
    if (op + on <= 0.0) throw PredictorError(Code::ZeroDenominator, "outcome activations are all zero");
    return ratio(pp, pn) - ratio(op, on);
}

TrialResult trial(Network& net, const PredictionMotif& m, bool outcome_present) {
    validate_motif(net, m);
    const Params& p = net.params();
    const auto edges = motif_edges(m);
    std::array<double, 6> before{};
    for (std::size_t i = 0; i < edges.size(); ++i) before[i] = net.edge(*net.find_edge(edges[i].first, edges[i].second)).weight;

    for (NodeId n : {m.cue, m.outcome_pos, m.outcome_neg, m.pred_pos, m.pred_neg}) net.node(n).activation = 0.0;

    TrialResult r;
    net.stimulate(m.cue, Signal{3});
    for (int t = 0; t < kPredictionTick; ++t) net.tick();

    const double w_pos = net.edge(*net.find_edge(m.cue, m.pred_pos)).weight;
    const double w_neg = net.edge(*net.find_edge(m.cue, m.pred_neg)).weight;
    double a_pos = p.a_max * w_pos / p.w_max;
    double a_neg = p.a_max * w_neg / p.w_max;
    net.node(m.pred_pos).activation = a_pos;
    net.node(m.pred_neg).activation = a_neg;
    if (a_pos + a_neg <= 0.0) a_pos = a_neg = 0.5 * p.a_max;
    r.s1.tick = net.tick_count();
    r.s1.activation = {{m.pred_pos, a_pos}, {m.pred_neg, a_neg}};

    for (int t = kPredictionTick; t + 1 < kOutcomeDeadline; ++t) net.tick();

    const NodeId outcome = outcome_present ? m.outcome_pos : m.outcome_neg;
    net.stimulate(outcome, Signal{3});
    auto strengthen = [&](NodeId s, NodeId d) { net.reinforce(ElementRef::edge(*net.find_edge(s, d))); };
    if (outcome_present) {
        strengthen(m.cue, m.pred_pos);
        strengthen(m.pred_pos, m.outcome_pos);
    } else {
        strengthen(m.cue, m.pred_neg);
        strengthen(m.pred_neg, m.outcome_neg);
        strengthen(m.pred_pos, m.outcome_neg);
    }
    net.tick();
    r.s2.tick = net.tick_count();
    r.s2.activation = {{m.outcome_pos, outcome_present ? p.a_max : 0.0},
                       {m.outcome_neg, outcome_present ? 0.0 : p.a_max}};

    r.error = prediction_error(r.s1, r.s2, m);
    for (std::size_t i = 0; i < edges.size(); ++i) {
        r.weight_change += std::fabs(net.edge(*net.find_edge(edges[i].first, edges[i].second)).weight - before[i]);
    }
    return r;
}

}  // namespace tnet
