#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "tnet/predictor.hpp"

using namespace tnet;

namespace {

struct Rig {
    Network net;
    PredictionMotif m;

    Rig() {
        const NodeId bell = net.add_node("Bell", Kind::sensory);
        const NodeId food = net.add_node("Food", Kind::sensory);
        m = build_motif(net, bell, food);
    }
};

ActivationSnapshot snap(NodeId a, double va, NodeId b, double vb) { return {0, {{a, va}, {b, vb}}}; }

}  // namespace

TEST_CASE("build_motif") {
    Rig r;
    CHECK(r.net.node(r.m.outcome_neg).label == "No-Food");
    CHECK(r.net.node(r.m.pred_pos).label == "Pred-Food");
    CHECK(r.net.node(r.m.pred_neg).label == "Pred-No-Food");
    CHECK(r.net.find_edge(r.m.outcome_pos, r.m.pred_pos));
    const auto edges = r.net.edges().size();
    CHECK(build_motif(r.net, r.m.cue, r.m.outcome_pos) == r.m);
    CHECK(r.net.edges().size() == edges);
    CHECK_THROWS_AS(build_motif(r.net, r.m.cue, r.m.cue), PredictorError);
    CHECK_THROWS_AS(build_motif(r.net, r.m.cue, 999), PredictorError);

    PredictionMotif broken = r.m;
    broken.pred_neg = broken.pred_pos;
    CHECK_THROWS_AS(validate_motif(r.net, broken), PredictorError);
}

TEST_CASE("prediction_error examples") {
    Rig r;
    const auto food = snap(r.m.outcome_pos, 1.0, r.m.outcome_neg, 0.0);
    const auto none = snap(r.m.outcome_pos, 0.0, r.m.outcome_neg, 1.0);
    CHECK(prediction_error(snap(r.m.pred_pos, 0.8, r.m.pred_neg, 0.2), food, r.m) == doctest::Approx(-0.2));
    CHECK(prediction_error(snap(r.m.pred_pos, 1.0, r.m.pred_neg, 0.0), food, r.m) == 0.0);
    CHECK(prediction_error(snap(r.m.pred_pos, 0.5, r.m.pred_neg, 0.5), none, r.m) == doctest::Approx(0.5));
    try {
        prediction_error(snap(r.m.pred_pos, 0.0, r.m.pred_neg, 0.0), food, r.m);
        FAIL("expected ZeroDenominator");
    } catch (const PredictorError& e) {
        CHECK(e.code() == PredictorError::Code::ZeroDenominator);
    }
    CHECK_THROWS_AS(prediction_error(snap(r.m.pred_pos, 1.0, r.m.pred_neg, 0.0), snap(r.m.outcome_pos, 0.0, r.m.outcome_neg, 0.0), r.m),
                    PredictorError);
}

TEST_CASE("property: error range and zero at perfection") {
    Rig r;
    std::mt19937_64 g(5);
    for (int i = 0; i < 2000; ++i) {
        const double pp = oracle::uniform(g), pn = oracle::uniform(g) + 1e-9;
        const double op = oracle::uniform(g), on = oracle::uniform(g) + 1e-9;
        const double e = prediction_error(snap(r.m.pred_pos, pp, r.m.pred_neg, pn), snap(r.m.outcome_pos, op, r.m.outcome_neg, on), r.m);
        CHECK(e >= -1.0);
        CHECK(e <= 1.0);
        const double same = prediction_error(snap(r.m.pred_pos, pp, r.m.pred_neg, pn), snap(r.m.outcome_pos, pp, r.m.outcome_neg, pn), r.m);
        CHECK(std::fabs(same) < 1e-12);
    }
}

TEST_CASE("convergence on a stationary schedule") {
    Rig r;
    std::vector<double> errs;
    for (int i = 0; i < 20; ++i) errs.push_back(trial(r.net, r.m, true).error);
    CHECK(errs.front() == doctest::Approx(-0.5));
    for (std::size_t i = 1; i < errs.size(); ++i) CHECK(std::fabs(errs[i]) <= std::fabs(errs[i - 1]));
    CHECK(std::fabs(errs.back()) < 0.05);

    const double settled = std::fabs(errs.back());
    const double flip1 = std::fabs(trial(r.net, r.m, false).error);
    const double flip2 = std::fabs(trial(r.net, r.m, false).error);
    CHECK(flip1 > settled);
    CHECK(flip2 < flip1);
}

TEST_CASE("weight change tracks error magnitude") {
    Rig r;
    std::mt19937_64 g(9);
    std::vector<double> err, dw;
    for (int i = 0; i < 60; ++i) {
        const auto t = trial(r.net, r.m, oracle::uniform(g) < 0.7);
        err.push_back(std::fabs(t.error));
        dw.push_back(t.weight_change);
    }
    CHECK(oracle::spearman(err, dw) >= 0.0);
}
