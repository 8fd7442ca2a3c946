#include <random>

#include "doctest.h"
#include "tnet/learning.hpp"

using namespace tnet;

namespace {

double edge_w(const Network& net, NodeId a, NodeId b) {
    auto e = net.find_edge(a, b);
    return e ? net.edge(*e).weight : 0.0;
}

bool reciprocal_closed(const Network& net) {
    for (const auto& e : net.edges()) {
        if (!net.find_edge(e.dst, e.src)) return false;
    }
    return true;
}

int hebbian_trials(const Params& p, int gap, int cap = 50) {
    Network net(p);
    const NodeId a = net.add_node("a", Kind::plain);
    const NodeId b = net.add_node("b", Kind::plain);
    for (int t = 1; t <= cap; ++t) {
        hebbian_episode(net, a, b, 1, 0);
        if (net.edge(*net.find_edge(a, b)).fixated) return t;
        for (int g = 0; g < gap; ++g) net.tick();
    }
    return cap + 1;
}

int reinforce_trials(const Params& p, int gap, int cap = 50) {
    Network net(p);
    inject_innate(net, {{{"sweet", Kind::reward, 2.0}}, {}, {}});
    const NodeId s = net.add_node("cue", Kind::plain);
    const NodeId r = net.node_id("sweet");
    for (int t = 1; t <= cap; ++t) {
        reinforce(net, s, r);
        if (net.edge(*net.find_edge(s, r)).fixated) return t;
        for (int g = 0; g < gap; ++g) net.tick();
    }
    return cap + 1;
}

}  // namespace

TEST_CASE("inject_innate") {
    Network net;
    InnateSpec spec{{{"sweet", Kind::reward, 2.0}, {"eat", Kind::effector, 1.5}}, {{"sweet", "eat", 1.5}}, {}};
    inject_innate(net, spec);
    const NodeId s = net.node_id("sweet");
    const NodeId e = net.node_id("eat");
    CHECK(net.node(s).fixated);
    CHECK(net.node(e).fixated);
    REQUIRE(net.find_edge(s, e));
    CHECK(net.edge(*net.find_edge(s, e)).fixated);
    CHECK(net.find_edge(e, s));

    Network empty;
    inject_innate(empty, {});
    CHECK(empty.nodes().empty());

    Network dangling;
    try {
        inject_innate(dangling, {{{"a", Kind::plain, 1.0}}, {{"a", "ghost", 1.0}}, {}});
        FAIL("expected DanglingEdge");
    } catch (const LearningError& err) {
        CHECK(err.code() == LearningError::Code::DanglingEdge);
    }
    CHECK(dangling.nodes().empty());

    Network dup;
    inject_innate(dup, {{{"a", Kind::plain, 1.0}}, {}, {}});
    CHECK_THROWS_AS(inject_innate(dup, {{{"a", Kind::plain, 1.0}}, {}, {}}), LearningError);

    Network bound;
    inject_innate(bound, {{{"pain", Kind::reward, 2.0}, {"flee", Kind::effector, 1.0}}, {}, {{"pain", "flee"}}});
    CHECK(edge_w(bound, bound.node_id("pain"), bound.node_id("flee")) >= bound.params().theta);
}

TEST_CASE("hebbian_episode") {
    Params p;
    // 0.4 per co-activation against 0.005 per silent tick: three reps fixate
    // both edges when 10 silent ticks separate them (0.35 -> 0.7 -> 1.1).
    Network net(p);
    const NodeId a = net.add_node("a", Kind::plain);
    const NodeId b = net.add_node("b", Kind::plain);
    hebbian_episode(net, a, b, 3, 10);
    CHECK(edge_w(net, a, b) == doctest::Approx(1.1));
    CHECK(net.edge(*net.find_edge(a, b)).fixated);
    CHECK(net.edge(*net.find_edge(b, a)).fixated);

    Network once(p);
    const NodeId x = once.add_node("x", Kind::plain);
    const NodeId y = once.add_node("y", Kind::plain);
    hebbian_episode(once, x, y, 1, 0);
    for (int t = 0; t < 200; ++t) once.tick();
    for (const auto& n : once.nodes()) CHECK(n.weight == 0.0);
    for (const auto& e : once.edges()) CHECK(e.weight == 0.0);

    CHECK_THROWS_AS(hebbian_episode(net, a, b, 0, 0), LearningError);
    CHECK_THROWS_AS(hebbian_episode(net, a, a, 1, 0), LearningError);
    CHECK_THROWS_AS(hebbian_episode(net, a, 77, 1, 0), LearningError);
}

TEST_CASE("reinforce") {
    Params p;
    CHECK(reinforce_trials(p, 5) == 2);
    CHECK(hebbian_trials(p, 5) == 3);

    Params strong;
    strong.boost = strong.theta / strong.dw;
    Network net(strong);
    inject_innate(net, {{{"sweet", Kind::reward, strong.w_max}}, {}, {}});
    const NodeId cue = net.add_node("cue", Kind::plain);
    reinforce(net, cue, net.node_id("sweet"));
    CHECK(net.edge(*net.find_edge(cue, net.node_id("sweet"))).fixated);

    CHECK_THROWS_AS(reinforce(net, net.node_id("sweet"), net.node_id("sweet")), LearningError);
    try {
        reinforce(net, net.node_id("sweet"), cue);
        FAIL("expected NotARewardNode");
    } catch (const LearningError& e) {
        CHECK(e.code() == LearningError::Code::NotARewardNode);
    }
}

TEST_CASE("supervision advantage") {
    for (int gap : {0, 3, 10}) {
        Params p;
        p.boost = 2.0;
        CHECK(reinforce_trials(p, gap) < hebbian_trials(p, gap));
        // Increments are discrete, so a boost barely above 1 can tie plain
        // Hebbian learning; it never does worse.
        for (double lambda : {1.01, 1.1, 1.25, 1.5, 2.5, 3.0}) {
            p.boost = lambda;
            CHECK(reinforce_trials(p, gap) <= hebbian_trials(p, gap));
        }
    }
}

TEST_CASE("replay") {
    Params p;
    Network net(p);
    std::vector<NodeId> ids;
    for (const char* l : {"a", "b", "c"}) ids.push_back(net.add_node(l, Kind::plain));
    replay(net, {ids, 0.0}, 3);
    CHECK(net.edge(*net.find_edge(ids[0], ids[1])).fixated);
    CHECK(net.edge(*net.find_edge(ids[1], ids[2])).fixated);
    CHECK(reciprocal_closed(net));
    CHECK_THROWS_AS(replay(net, {ids, 0.0}, 0), LearningError);
    CHECK_THROWS_AS(replay(net, {{}, 0.0}, 1), LearningError);

    Network loop(p);
    const NodeId a = loop.add_node("A", Kind::plain);
    const NodeId b = loop.add_node("B", Kind::plain);
    const NodeId c = loop.add_node("C", Kind::plain);
    replay(loop, {{a, b, c, a}, 0.0}, 1);
    CHECK(edge_w(loop, a, b) > 0.0);
    CHECK(edge_w(loop, b, c) > 0.0);
    CHECK(edge_w(loop, c, a) > 0.0);
    CHECK_FALSE(loop.has_pending_signals());
}

TEST_CASE("replay lowers the cue needed to fire the first node") {
    Params p;
    Network control(p);
    std::vector<NodeId> ids;
    for (const char* l : {"a", "b", "c"}) ids.push_back(control.add_node(l, Kind::plain));
    Network replayed = control;
    replay(replayed, {ids, 0.0}, 3);
    CHECK(min_cue_to_fire(replayed, ids[0]) < min_cue_to_fire(control, ids[0]));
    for (NodeId n : ids) CHECK(replayed.node(n).weight > control.node(n).weight);
}

TEST_CASE("property: replay monotonicity") {
    std::mt19937_64 g(12);
    for (int trial = 0; trial < 40; ++trial) {
        Network base;
        const int n = 2 + static_cast<int>(g() % 5);
        for (int i = 0; i < n; ++i) base.add_node("n" + std::to_string(i), Kind::plain, 0.1 * static_cast<double>(g() % 8));
        Episode ep;
        const int len = 1 + static_cast<int>(g() % 6);
        for (int i = 0; i < len; ++i) ep.nodes.push_back(static_cast<NodeId>(g() % n));
        ep.salience = (g() % 2) ? 0.9 : 0.1;
        const int r = 1 + static_cast<int>(g() % 4);
        Network lo = base, hi = base;
        replay(lo, ep, r);
        replay(hi, ep, r + 1);
        for (std::size_t i = 0; i < lo.nodes().size(); ++i) CHECK(hi.nodes()[i].weight >= lo.nodes()[i].weight);
        REQUIRE(lo.edges().size() == hi.edges().size());
        for (std::size_t i = 0; i < lo.edges().size(); ++i) CHECK(hi.edges()[i].weight >= lo.edges()[i].weight);
    }
}

TEST_CASE("property: reciprocal edges exist after every learning call") {
    std::mt19937_64 g(31);
    Network net;
    inject_innate(net, {{{"r", Kind::reward, 2.0}, {"e", Kind::effector, 1.0}}, {{"r", "e", 1.0}}, {}});
    for (int i = 0; i < 8; ++i) net.add_node("p" + std::to_string(i), Kind::plain);
    const NodeId r = net.node_id("r");
    for (int step = 0; step < 300; ++step) {
        const NodeId a = static_cast<NodeId>(2 + g() % 8);
        const NodeId b = static_cast<NodeId>(2 + g() % 8);
        switch (g() % 3) {
            case 0:
                if (a != b) hebbian_episode(net, a, b, 1 + static_cast<int>(g() % 3), static_cast<int>(g() % 4));
                break;
            case 1: reinforce(net, a, r); break;
            default: replay(net, {{a, b, static_cast<NodeId>(2 + g() % 8)}, 0.6}, 1 + static_cast<int>(g() % 2));
        }
        REQUIRE(reciprocal_closed(net));
    }
}
