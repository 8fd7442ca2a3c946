#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace tnet {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;

enum class Kind { sensory, reward, effector, chunk, plain };

const char* to_string(Kind k);
Kind kind_from_string(std::string_view s);

/// Substrate constants. Defaults reproduce the golden segmentation runs.
struct Params {
    double dw = 0.4;
    double decay_w = 0.005;
    double theta = 1.0;
    double w_max = 3.0;
    double a_max = 1.0;
    double decay_a = 0.2;
    double beta = 0.5;
    double back_factor = 0.5;
    double reset_factor = 0.8;
    double fire_threshold_det = 0.5;
    double boost = 2.0;
    // Activation response a += v * (act_base + act_gain * w / w_max) / 3.
    double act_base = 0.2;
    double act_gain = 0.3;
    bool deterministic = true;

    /// Throws NetworkError(InvalidParams) naming the offending field.
    void validate() const;

    bool operator==(const Params&) const = default;
};

/// Integer message in {-3..3}; 0 is absence, negatives inhibit.
struct Signal {
    int value = 0;

    static Signal clamped(int v);
    int magnitude() const { return value < 0 ? -value : value; }
    bool operator==(const Signal&) const = default;
};

/// Fields shared by nodes and edges.
struct ElementState {
    double weight = 0.0;
    double activation = 0.0;
    bool fixated = false;
    int k = 0;  // increments applied at or above theta
    // Non-plastic elements change weight only through explicit reinforce
    // calls, never through the tick's activation-driven update.
    bool plastic = true;

    bool operator==(const ElementState&) const = default;
};

struct NodeState : ElementState {
    NodeId id = 0;
    std::string label;
    Kind kind = Kind::plain;

    bool operator==(const NodeState&) const = default;
};

struct EdgeState : ElementState {
    EdgeId id = 0;
    NodeId src = 0;
    NodeId dst = 0;
    bool reciprocal = false;  // created as the back partner of another edge

    bool operator==(const EdgeState&) const = default;
};

struct ElementRef {
    enum class Type { node, edge };
    Type type = Type::node;
    std::uint32_t id = 0;

    static ElementRef node(NodeId n) { return {Type::node, n}; }
    static ElementRef edge(EdgeId e) { return {Type::edge, e}; }
    std::string key() const;
};

struct Event {
    std::uint64_t tick = 0;
    std::string kind;
    std::string element;
    double value = 0.0;

    bool operator==(const Event&) const = default;
};

using EventLog = std::vector<Event>;

/// "tick kind element value", value printed with 9 significant digits.
std::string format_event(const Event& e);

class NetworkError : public std::runtime_error {
public:
    enum class Code { UnknownNode, UnknownEdge, DuplicateLabel, SelfEdge, InvalidParams };

    NetworkError(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Code code() const { return code_; }

private:
    Code code_;
};

/// Weight schedule: +dw (times boost when flagged) below theta,
/// +dw*beta^k at or above it. Returns the new weight.
double update_weight(ElementState& e, const Params& p, bool boosted = false);

/// Output magnitude round(|in| (0.5 + 0.5 w/w_max) (0.5 + 0.5 a/a_max))
/// clamped to 1..3, sign of `in` kept. A zero input yields zero.
Signal signal_out(const ElementState& e, Signal in, const Params& p);

/// Attenuated return magnitude floor(|forward| * back_factor), sign kept.
Signal back_signal(Signal forward, const Params& p);

/// Activation gained by an element of weight `w` from an input of value `v`.
double activation_delta(int v, double w, const Params& p);

class Network {
public:
    explicit Network(Params params = {}, std::uint64_t seed = 0);

    NodeId add_node(std::string label, Kind kind, double weight = 0.0);
    EdgeId add_edge(NodeId src, NodeId dst, double weight = 0.0, bool reciprocal = false);

    /// Both directions exist afterwards; missing ones are created at weight 0.
    std::pair<EdgeId, EdgeId> ensure_reciprocal(NodeId src, NodeId dst);

    std::optional<NodeId> find_node(std::string_view label) const;
    NodeId node_id(std::string_view label) const;
    std::optional<EdgeId> find_edge(NodeId src, NodeId dst) const;
    bool has_node(NodeId n) const { return n < nodes_.size(); }

    const NodeState& node(NodeId n) const;
    NodeState& node(NodeId n);
    const EdgeState& edge(EdgeId e) const;
    EdgeState& edge(EdgeId e);
    ElementState& element(ElementRef r);
    const ElementState& element(ElementRef r) const;

    const std::vector<NodeState>& nodes() const { return nodes_; }
    const std::vector<EdgeState>& edges() const { return edges_; }
    const std::vector<EdgeId>& out_edges(NodeId n) const;
    const std::vector<EdgeId>& in_edges(NodeId n) const;

    const Params& params() const { return params_; }
    void set_params(const Params& p);
    std::uint64_t seed() const { return seed_; }
    void set_seed(std::uint64_t s) { seed_ = s; }
    std::uint64_t tick_count() const { return tick_count_; }

    /// One global step: external input, fire, relay, weight update, decay.
    /// Keys of `external` must be sensory nodes.
    EventLog tick(const std::map<NodeId, Signal>& external = {});

    /// Internal drive delivered in the next tick's input phase (any kind).
    void stimulate(NodeId n, Signal s);
    /// Places a signal on an edge; it reaches the destination next tick.
    void inject(EdgeId e, Signal s);
    bool has_pending_signals() const { return !pending_.empty(); }

    /// Explicit learning event: applies update_weight now and exempts the
    /// element from decay in the current tick.
    double reinforce(ElementRef r, bool boosted = false);
    void mark_observed(ElementRef r);

    /// Weight decay for unobserved non-fixated elements, then activation
    /// decay for all; clears the observed marks.
    void apply_decay();
    void nightly_reset();

    /// Every later tick also appends its events to `sink` (nullptr detaches).
    /// Copies of the network share the sink.
    void attach_log(EventLog* sink) { sink_ = sink; }

    /// Restores counters when loading a snapshot.
    void restore_tick_count(std::uint64_t t) { tick_count_ = t; }

    bool operator==(const Network& o) const;

private:
    struct Pending {
        EdgeId edge;
        int value;
        bool echo;
    };

    NetworkError unknown_node(NodeId n) const;
    void grow_marks();

    Params params_;
    std::uint64_t seed_;
    std::uint64_t tick_count_ = 0;
    std::vector<NodeState> nodes_;
    std::vector<EdgeState> edges_;
    std::vector<std::vector<EdgeId>> out_;
    std::vector<std::vector<EdgeId>> in_;
    std::map<std::pair<NodeId, NodeId>, EdgeId> edge_index_;
    std::unordered_map<std::string, NodeId> label_index_;

    EventLog* sink_ = nullptr;
    std::vector<Pending> pending_;
    std::map<NodeId, int> stimuli_;
    std::vector<char> node_observed_;
    std::vector<char> edge_observed_;
    std::vector<char> node_reinforced_;
    std::vector<char> edge_reinforced_;
};

}  // namespace tnet
