#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tnet/network.hpp"
#include "tnet/utf8.hpp"

namespace tnet {

struct ChunkerParams {
    int W = 24;
    int l_min = 2;
    int window_coact = 3;
    // Serial-order detector gains (activation added per tick).
    double order_coincident = 0.6;
    double order_single = 0.05;
    double order_sim = 0.2;
    // Fraction of the remaining activation headroom a full match fills.
    double match_gain = 0.5;
    Params substrate;

    void validate() const;
};

struct BufferedSymbol {
    char32_t symbol;
    std::uint64_t tick;
};

/// Sliding window of recent symbols plus the responding chunk nodes.
struct WorkingBuffer {
    std::deque<BufferedSymbol> symbols;
    std::vector<NodeId> active_elements;

    SymbolString text() const;
};

struct Candidate {
    SymbolString text;
    int occurrences = 0;
    double matched_weight = 0.0;
    int length = 0;
    int leftmost = 0;
};

/// A shared block: u1[a, a+len) == u2[b, b+len).
struct Block {
    int a = 0;
    int b = 0;
    int len = 0;

    bool operator==(const Block&) const = default;
};

struct Decomposition {
    std::vector<Block> blocks;
    std::vector<SymbolString> common;
    std::vector<SymbolString> residues1;
    std::vector<SymbolString> residues2;
};

class ChunkerError : public std::runtime_error {
public:
    enum class Code { EmptyMembers, SameNode, LabelConflict, InvalidParams };

    ChunkerError(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Code code() const { return code_; }

private:
    Code code_;
};

/// Non-overlapping left-to-right occurrences of `sub` in `text`.
std::vector<int> occurrences(const SymbolString& text, const SymbolString& sub);

/// Repeated substrings and trace matches in the buffer, best first.
std::vector<Candidate> find_candidates(const WorkingBuffer& buf, const Network& net, const ChunkerParams& cp);

/// Tiles both units into blocks of length >= l_min maximizing shared
/// length, then shared block count, then leftmost alignment.
std::optional<Decomposition> decompose_units(const SymbolString& u1, const SymbolString& u2, int l_min);

/// Chunk node fed by `members` in order; created on first call.
NodeId allocate_chunk_node(Network& net, const std::vector<NodeId>& members);

struct OrderVariants {
    NodeId simultaneous;
    NodeId ab;
    NodeId ba;
    NodeId a;
    NodeId b;
};

/// Ensures the order-insensitive and the two order-sensitive chunk nodes.
OrderVariants order_variants(Network& net, NodeId a, NodeId b);

/// Drives the three order variants with pair presentations. The a->ab
/// and b->ba paths carry a one-tick delay; the simultaneous node decays
/// at half the substrate rate.
class SerialOrderCoder {
public:
    SerialOrderCoder(Network& net, OrderVariants v, ChunkerParams cp);

    struct Fired {
        bool simultaneous = false;
        bool ab = false;
        bool ba = false;
    };

    /// `first` then `second` on consecutive ticks, then window_coact - 1
    /// silent ticks. Variants that fire during the pair are reinforced once.
    Fired present(NodeId first, NodeId second);

    const OrderVariants& variants() const { return v_; }

private:
    void step(bool a_now, bool b_now, Fired& fired);

    Network& net_;
    OrderVariants v_;
    ChunkerParams cp_;
    bool a_prev_ = false;
    bool b_prev_ = false;
    double act_sim_ = 0.0;
    double act_ab_ = 0.0;
    double act_ba_ = 0.0;
};

/// Responding chunk nodes after presenting `fragment`, best first.
/// Resulting activation is prior + (a_max - prior) * match_gain * m where
/// m is the longest common substring over the longer length.
std::vector<std::pair<NodeId, double>> match(Network& net, const SymbolString& fragment, WorkingBuffer& buf,
                                             const ChunkerParams& cp);

/// Least prior activation that lets a chunk with match strength
/// `m_primed` outrank a rival with strength `m_rival` and prior
/// `rival_prior`. Priming must strictly exceed this value.
double min_priming_to_outrank(double m_primed, double m_rival, double rival_prior, const ChunkerParams& cp);

/// Online segmenter: one instance owns a network and its buffer.
///
/// A buffer position is consolidated when it is evicted: the window is
/// parsed (known traces first, then repeats, then residual units split
/// against partially matching traces), and the segment starting at the
/// head is committed together with every co-resident copy of it.
class Chunker {
public:
    explicit Chunker(ChunkerParams cp = {}, std::uint64_t seed = 0);
    Chunker(Network net, ChunkerParams cp);

    void observe_symbol(char32_t symbol);
    void observe(const SymbolString& stream);
    /// Marks the end of a stream and consolidates the remaining buffer.
    void end_stream();
    void silence(int ticks);

    const WorkingBuffer& buffer() const { return buf_; }
    const Network& network() const { return net_; }
    Network& network() { return net_; }
    const EventLog& log() const { return log_; }
    const ChunkerParams& params() const { return cp_; }

    /// Sorted labels of fixated chunk nodes.
    std::vector<std::string> fixated_chunks() const;
    std::optional<NodeId> chunk(const SymbolString& label) const;

private:
    enum class SegKind { match, repeat, unit, open, split };
    struct Segment {
        int end;
        SegKind kind;
    };
    using Spans = std::vector<std::pair<int, int>>;

    struct Trace {
        SymbolString label;
        NodeId id;
        double weight;
        bool fixated;
    };

    void tick_once(const std::map<NodeId, Signal>& external);
    void process_oldest();
    std::map<int, Segment> parse(const SymbolString& text) const;
    bool valid(int n, const Spans& spans, int len, const std::vector<int>& occ) const;
    std::vector<int> span_occurrences(const SymbolString& text, const Spans& spans, const SymbolString& sub) const;
    static Spans carve(const Spans& spans, const std::vector<int>& occ, int len);
    std::vector<Trace> traces() const;

    NodeId chunk_node(const SymbolString& label);
    EdgeId chunk_edge(NodeId src, NodeId dst);
    bool is_fixated(const std::optional<SymbolString>& label) const;
    void commit_node(NodeId n, bool boost);
    void commit_edge(NodeId src, NodeId dst, bool boost);
    void link(const SymbolString& label, bool boost);
    void reactivate(const SymbolString& label, bool boost);
    void refresh_active();

    ChunkerParams cp_;
    Network net_;
    WorkingBuffer buf_;
    EventLog log_;
    std::map<SymbolString, NodeId> chunks_;
    std::vector<SymbolString> chunk_order_;
    std::map<char32_t, NodeId> sensory_;
    std::map<std::uint64_t, std::pair<SymbolString, bool>> pending_;
    std::optional<SymbolString> prev_;
    bool prev_boost_ = false;
    std::optional<NodeId> prev_sensory_;
    std::int64_t covered_until_ = -1;
    std::uint64_t clock_ = 0;
    bool ended_ = false;
};

}  // namespace tnet
