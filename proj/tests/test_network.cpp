#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "tnet/network.hpp"

using namespace tnet;

namespace {

int count_kind(const EventLog& log, const std::string& kind) {
    int n = 0;
    for (const auto& e : log) n += e.kind == kind;
    return n;
}

void check_bounds(const Network& net) {
    const Params& p = net.params();
    for (const auto& n : net.nodes()) {
        REQUIRE(n.weight >= 0.0);
        REQUIRE(n.weight <= p.w_max);
        REQUIRE(n.activation >= 0.0);
        REQUIRE(n.activation <= p.a_max);
    }
    for (const auto& e : net.edges()) {
        REQUIRE(e.weight >= 0.0);
        REQUIRE(e.weight <= p.w_max);
        REQUIRE(e.activation >= 0.0);
        REQUIRE(e.activation <= p.a_max);
    }
}

}  // namespace

TEST_CASE("params validation names the field") {
    Params p;
    CHECK_NOTHROW(p.validate());
    p.theta = 5.0;
    try {
        p.validate();
        FAIL("expected InvalidParams");
    } catch (const NetworkError& e) {
        CHECK(e.code() == NetworkError::Code::InvalidParams);
        CHECK(std::string(e.what()).find("theta") != std::string::npos);
    }
    Params q;
    q.beta = 1.0;
    CHECK_THROWS_AS(Network{q}, NetworkError);
}

TEST_CASE("update_weight schedule") {
    Params p;
    ElementState e;
    e.weight = 0.5;
    CHECK(update_weight(e, p) == doctest::Approx(0.9));
    CHECK_FALSE(e.fixated);

    ElementState f;
    f.weight = 1.2;
    f.fixated = true;
    f.k = 1;
    CHECK(update_weight(f, p) == doctest::Approx(1.4));
    CHECK(f.k == 2);

    ElementState top;
    top.weight = p.w_max;
    top.fixated = true;
    CHECK(update_weight(top, p) == p.w_max);

    ElementState fresh;
    for (int i = 0; i < 3; ++i) update_weight(fresh, p);
    CHECK(fresh.weight == doctest::Approx(1.2));
    CHECK(fresh.fixated);

    ElementState boosted;
    update_weight(boosted, p, true);
    CHECK(boosted.weight == doctest::Approx(0.8));
}

TEST_CASE("signal_out examples and monotonicity") {
    Params p;
    ElementState e;
    e.weight = p.w_max;
    e.activation = p.a_max;
    CHECK(signal_out(e, Signal{3}, p).value == 3);
    CHECK(signal_out(e, Signal{-2}, p).value < 0);
    ElementState weak;
    weak.weight = 0.0;
    weak.activation = 0.1;
    CHECK(signal_out(weak, Signal{1}, p).value == 1);
    CHECK(signal_out(weak, Signal{0}, p).value == 0);

    // Exhaustive check on a grid of weights, activations and inputs.
    const int steps = 12;
    for (int wi = 0; wi <= steps; ++wi)
        for (int ai = 0; ai <= steps; ++ai)
            for (int v = 1; v <= 3; ++v) {
                ElementState x;
                x.weight = p.w_max * wi / steps;
                x.activation = p.a_max * ai / steps;
                const int base = signal_out(x, Signal{v}, p).value;
                if (wi < steps) {
                    ElementState y = x;
                    y.weight = p.w_max * (wi + 1) / steps;
                    CHECK(signal_out(y, Signal{v}, p).value >= base);
                }
                if (ai < steps) {
                    ElementState y = x;
                    y.activation = p.a_max * (ai + 1) / steps;
                    CHECK(signal_out(y, Signal{v}, p).value >= base);
                }
                if (v < 3) CHECK(signal_out(x, Signal{v + 1}, p).value >= base);
            }
}

TEST_CASE("back signals are weaker") {
    Params p;
    CHECK(back_signal(Signal{3}, p).magnitude() <= 2);
    for (int v = 2; v <= 3; ++v) CHECK(back_signal(Signal{v}, p).magnitude() < v);
    CHECK(back_signal(Signal{-3}, p).value < 0);
}

TEST_CASE("ensure_reciprocal") {
    Network net;
    const NodeId a = net.add_node("a", Kind::plain);
    const NodeId b = net.add_node("b", Kind::plain);
    const auto [ab, ba] = net.ensure_reciprocal(a, b);
    CHECK(net.edge(ab).weight == 0.0);
    CHECK(net.edge(ba).weight == 0.0);
    CHECK(net.edge(ba).reciprocal);
    CHECK_FALSE(net.edge(ab).reciprocal);
    CHECK(net.ensure_reciprocal(a, b) == std::pair{ab, ba});
    CHECK(net.edges().size() == 2);
    CHECK_THROWS_AS(net.ensure_reciprocal(a, 99), NetworkError);
    CHECK_THROWS_AS(net.add_edge(a, a), NetworkError);
    CHECK_THROWS_AS(net.add_node("a", Kind::plain), NetworkError);
}

TEST_CASE("pure-decay tick") {
    Network net;
    const NodeId a = net.add_node("a", Kind::plain, 0.4);
    const NodeId b = net.add_node("b", Kind::plain, 1.5);
    const EdgeId e = net.add_edge(a, b, 0.3);
    const EventLog log = net.tick();
    CHECK(count_kind(log, "fire") == 0);
    CHECK(net.node(a).weight == doctest::Approx(0.395));
    CHECK(net.node(b).weight == 1.5);
    CHECK(net.edge(e).weight == doctest::Approx(0.295));
    CHECK(net.tick_count() == 1);
}

TEST_CASE("deterministic firing reaches every out-edge in the same tick") {
    Network net;
    const NodeId s = net.add_node("s", Kind::sensory);
    const NodeId x = net.add_node("x", Kind::plain);
    const NodeId y = net.add_node("y", Kind::plain);
    const EdgeId sx = net.add_edge(s, x);
    const EdgeId sy = net.add_edge(s, y);
    net.node(s).activation = 1.0;
    const EventLog log = net.tick();
    std::set<std::string> relayed;
    for (const auto& ev : log) {
        if (ev.kind == "relay") relayed.insert(ev.element);
    }
    CHECK(count_kind(log, "fire") == 1);
    CHECK(relayed == std::set<std::string>{ElementRef::edge(sx).key(), ElementRef::edge(sy).key()});
    CHECK_THROWS_AS(net.tick({{x, Signal{3}}}), NetworkError);
}

TEST_CASE("probabilistic firing rate follows activation") {
    Params p;
    p.deterministic = false;
    Network net(p, 42);
    const NodeId n = net.add_node("n", Kind::plain);
    const int ticks = 100000;
    int fired = 0;
    for (int t = 0; t < ticks; ++t) {
        net.node(n).activation = 0.4;
        fired += count_kind(net.tick(), "fire");
    }
    CHECK(std::fabs(fired / double(ticks) - 0.4) < 0.02);
}

TEST_CASE("negative input inhibits") {
    Network net;
    const NodeId n = net.add_node("n", Kind::plain);
    net.node(n).activation = 0.9;
    net.stimulate(n, Signal{-3});
    const EventLog log = net.tick();
    CHECK(count_kind(log, "fire") == 0);
    CHECK(net.node(n).activation < 0.9);
    CHECK(net.node(n).weight == 0.0);
}

TEST_CASE("apply_decay examples") {
    Network net;
    const NodeId a = net.add_node("a", Kind::plain, 0.4);
    const NodeId f = net.add_node("f", Kind::plain, 1.2);
    const NodeId z = net.add_node("z", Kind::plain, 0.002);
    net.apply_decay();
    CHECK(net.node(z).weight == 0.0);
    for (int i = 1; i < 30; ++i) net.apply_decay();
    CHECK(net.node(a).weight == doctest::Approx(0.25));
    for (int i = 0; i < 1000; ++i) net.apply_decay();
    CHECK(net.node(f).weight == 1.2);
}

TEST_CASE("nightly_reset") {
    Network net;
    const NodeId a = net.add_node("a", Kind::plain, 1.5);
    const NodeId b = net.add_node("b", Kind::plain, 1.0);
    const NodeId c = net.add_node("c", Kind::plain, 0.9);
    net.node(a).k = 3;
    net.nightly_reset();
    CHECK(net.node(a).weight == doctest::Approx(1.1));
    CHECK(net.node(a).k == 0);
    CHECK(net.node(b).weight == 1.0);
    CHECK(net.node(c).weight == 0.9);
}

TEST_CASE("loop signals between reciprocal nodes die out") {
    Network net;
    const NodeId a = net.add_node("a", Kind::plain);
    const NodeId b = net.add_node("b", Kind::plain);
    const auto [ab, ba] = net.ensure_reciprocal(a, b);
    (void)ba;
    net.inject(ab, Signal{3});
    std::vector<int> echoes;
    for (int t = 0; t < 20 && net.has_pending_signals(); ++t) {
        for (const auto& ev : net.tick()) {
            if (ev.kind == "echo") echoes.push_back(static_cast<int>(ev.value));
        }
    }
    CHECK_FALSE(net.has_pending_signals());
    REQUIRE_FALSE(echoes.empty());
    CHECK(echoes.front() < 3);
    for (std::size_t i = 1; i < echoes.size(); ++i) CHECK(echoes[i] < echoes[i - 1]);
}

TEST_CASE("property: bounds, fixation floor and decay totality under random input") {
    std::mt19937_64 g(99);
    Params p;
    p.deterministic = false;
    Network net(p, 5);
    std::vector<NodeId> sensors;
    for (int i = 0; i < 6; ++i) sensors.push_back(net.add_node("s" + std::to_string(i), Kind::sensory));
    for (int i = 0; i < 6; ++i) net.add_node("h" + std::to_string(i), Kind::plain);
    for (NodeId i = 0; i < 12; ++i)
        for (NodeId j = 0; j < 12; ++j)
            if (i != j && std::uniform_real_distribution<double>(0, 1)(g) < 0.3) net.ensure_reciprocal(i, j);

    std::uniform_int_distribution<int> sig(-3, 3);
    for (int t = 0; t < 20000; ++t) {
        std::map<NodeId, Signal> ext;
        for (NodeId s : sensors) {
            if (g() % 3 == 0) ext[s] = Signal{sig(g)};
        }
        std::vector<char> was_fixed;
        for (const auto& n : net.nodes()) was_fixed.push_back(n.fixated);
        net.tick(ext);
        if (t % 997 == 0) net.nightly_reset();
        check_bounds(net);
        for (const auto& n : net.nodes()) {
            if (n.fixated) REQUIRE(n.weight >= p.theta);
            if (was_fixed[n.id]) REQUIRE(n.fixated);
        }
        for (const auto& e : net.edges()) {
            if (e.fixated) REQUIRE(e.weight >= p.theta);
        }
    }

    double worst = 0.0;
    for (const auto& n : net.nodes()) worst = std::max(worst, n.fixated ? 0.0 : n.weight);
    for (const auto& e : net.edges()) worst = std::max(worst, e.fixated ? 0.0 : e.weight);
    const int limit = static_cast<int>(std::ceil(worst / p.decay_w)) + 40;  // pending relays drain first
    for (int t = 0; t < limit; ++t) net.tick();
    for (const auto& n : net.nodes()) {
        if (!n.fixated) CHECK(n.weight == 0.0);
    }
    for (const auto& e : net.edges()) {
        if (!e.fixated) CHECK(e.weight == 0.0);
    }
}

TEST_CASE("property: decay reaches exactly zero within ceil(w / decay_w) ticks") {
    std::mt19937_64 g(3);
    Params p;
    for (int trial = 0; trial < 200; ++trial) {
        Network net(p);
        const double w0 = std::uniform_real_distribution<double>(0.0, 0.99)(g);
        const NodeId n = net.add_node("n", Kind::plain, w0);
        const int limit = static_cast<int>(std::ceil(w0 / p.decay_w));
        for (int t = 0; t < limit; ++t) net.tick();
        CHECK(net.node(n).weight == 0.0);
    }
}

TEST_CASE("property: identical seeds replay identically") {
    Params p;
    p.deterministic = false;
    auto run = [&](std::uint64_t seed) {
        Network net(p, seed);
        std::mt19937_64 g(17);
        for (int i = 0; i < 5; ++i) net.add_node("s" + std::to_string(i), Kind::sensory);
        for (NodeId i = 0; i < 5; ++i)
            for (NodeId j = i + 1; j < 5; ++j) net.ensure_reciprocal(i, j);
        EventLog all;
        for (int t = 0; t < 500; ++t) {
            auto log = net.tick({{static_cast<NodeId>(g() % 5), Signal{3}}});
            all.insert(all.end(), log.begin(), log.end());
        }
        return std::pair{all, net};
    };
    const auto [l1, n1] = run(8);
    const auto [l2, n2] = run(8);
    CHECK(l1 == l2);
    CHECK(n1 == n2);
}
