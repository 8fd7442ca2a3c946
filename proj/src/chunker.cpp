#include "tnet/chunker.hpp"

#include <algorithm>
#include <set>
#include <tuple>

namespace tnet {

namespace {

std::string node_name(const NodeState& n) { return n.label.empty() ? "n" + std::to_string(n.id) : n.label; }

void make_rigid(Network& net, std::pair<EdgeId, EdgeId> pair) {
    net.edge(pair.first).plastic = false;
    net.edge(pair.second).plastic = false;
}

NodeId ensure_chunk_label(Network& net, const std::string& label) {
    if (auto id = net.find_node(label)) {
        if (net.node(*id).kind != Kind::chunk) {
            throw ChunkerError(ChunkerError::Code::LabelConflict, "label '" + label + "' is taken by a non-chunk node");
        }
        return *id;
    }
    const NodeId id = net.add_node(label, Kind::chunk);
    net.node(id).plastic = false;
    return id;
}

int longest_common_substring(const SymbolString& x, const SymbolString& y) {
    std::vector<int> prev(y.size() + 1, 0), cur(y.size() + 1, 0);
    int best = 0;
    for (std::size_t i = 1; i <= x.size(); ++i) {
        for (std::size_t j = 1; j <= y.size(); ++j) {
            cur[j] = x[i - 1] == y[j - 1] ? prev[j - 1] + 1 : 0;
            best = std::max(best, cur[j]);
        }
        std::swap(prev, cur);
    }
    return best;
}

// Memoized search over (i, j) = positions reached in (u1, u2).
class Tiler {
public:
    Tiler(const SymbolString& u1, const SymbolString& u2, int l_min)
        : u1_(u1), u2_(u2), l_min_(l_min), memo_((u1.size() + 1) * (u2.size() + 1)) {}

    struct Best {
        int shared = 0;
        int count = 0;
        int position = 0;  // negated sum of block starts, larger is further left
        std::vector<Block> blocks;

        auto key() const { return std::make_tuple(shared, count, position); }
    };

    const std::optional<Best>& solve(int i, int j) {
        Slot& slot = memo_[static_cast<std::size_t>(i) * (u2_.size() + 1) + static_cast<std::size_t>(j)];
        if (slot.done) return slot.best;
        const int n1 = static_cast<int>(u1_.size());
        const int n2 = static_cast<int>(u2_.size());
        std::optional<Best> best;
        if (gap_ok(n1 - i) && gap_ok(n2 - j)) best = Best{};
        for (int a = i; a < n1; ++a) {
            if (!gap_ok(a - i)) continue;
            for (int b = j; b < n2; ++b) {
                if (!gap_ok(b - j)) continue;
                int len = 0;
                while (a + len < n1 && b + len < n2 && u1_[a + len] == u2_[b + len]) {
                    ++len;
                    if (len < l_min_) continue;
                    const auto& rest = solve(a + len, b + len);
                    if (!rest) continue;
                    Best cand{rest->shared + len, rest->count + 1, rest->position - (a + b), {}};
                    if (!best || cand.key() > best->key()) {
                        cand.blocks.push_back({a, b, len});
                        cand.blocks.insert(cand.blocks.end(), rest->blocks.begin(), rest->blocks.end());
                        best = std::move(cand);
                    }
                }
            }
        }
        slot.done = true;
        slot.best = std::move(best);
        return slot.best;
    }

private:
    struct Slot {
        bool done = false;
        std::optional<Best> best;
    };

    bool gap_ok(int g) const { return g == 0 || g >= l_min_; }

    const SymbolString& u1_;
    const SymbolString& u2_;
    int l_min_;
    std::vector<Slot> memo_;
};

std::vector<SymbolString> residues(const SymbolString& u, const std::vector<Block>& blocks, bool first) {
    std::vector<SymbolString> out;
    int pos = 0;
    for (const auto& b : blocks) {
        const int s = first ? b.a : b.b;
        if (s > pos) out.push_back(u.substr(pos, s - pos));
        pos = s + b.len;
    }
    if (pos < static_cast<int>(u.size())) out.push_back(u.substr(pos));
    return out;
}

}  // namespace

void ChunkerParams::validate() const {
    if (l_min < 2) throw ChunkerError(ChunkerError::Code::InvalidParams, "chunker.l_min: must be >= 2");
    if (W < 2 * l_min) throw ChunkerError(ChunkerError::Code::InvalidParams, "chunker.W: must be >= 2 * l_min");
    if (window_coact < 1) throw ChunkerError(ChunkerError::Code::InvalidParams, "chunker.window_coact: must be >= 1");
    if (!(match_gain > 0 && match_gain <= 1)) {
        throw ChunkerError(ChunkerError::Code::InvalidParams, "chunker.match_gain: must lie in (0,1]");
    }
    if (order_coincident <= 0 || order_single < 0 || order_sim <= 0) {
        throw ChunkerError(ChunkerError::Code::InvalidParams, "chunker.order_*: gains must be positive");
    }
    substrate.validate();
}

SymbolString WorkingBuffer::text() const {
    SymbolString s;
    s.reserve(symbols.size());
    for (const auto& b : symbols) s += b.symbol;
    return s;
}

std::vector<int> occurrences(const SymbolString& text, const SymbolString& sub) {
    std::vector<int> occ;
    if (sub.empty()) return occ;
    std::size_t i = text.find(sub);
    while (i != SymbolString::npos) {
        occ.push_back(static_cast<int>(i));
        i = text.find(sub, i + sub.size());
    }
    return occ;
}

std::vector<Candidate> find_candidates(const WorkingBuffer& buf, const Network& net, const ChunkerParams& cp) {
    const SymbolString text = buf.text();
    const int n = static_cast<int>(text.size());
    std::map<SymbolString, Candidate> found;
    for (int i = 0; i < n; ++i) {
        for (int len = cp.l_min; i + len <= n; ++len) {
            SymbolString sub = text.substr(i, len);
            if (found.count(sub)) continue;
            const auto occ = occurrences(text, sub);
            double matched = 0.0;
            if (auto id = net.find_node(to_utf8(sub))) {
                const NodeState& ns = net.node(*id);
                if (ns.kind == Kind::chunk && ns.weight > 0.0) matched = ns.weight;
            }
            if (occ.size() < 2 && matched <= 0.0) continue;
            found.emplace(sub, Candidate{sub, static_cast<int>(occ.size()), matched, len, occ.front()});
        }
    }
    std::vector<Candidate> out;
    for (auto& [k, c] : found) out.push_back(std::move(c));
    std::sort(out.begin(), out.end(), [](const Candidate& x, const Candidate& y) {
        return std::make_tuple(-x.matched_weight, -x.occurrences, -x.length, x.leftmost, x.text) <
               std::make_tuple(-y.matched_weight, -y.occurrences, -y.length, y.leftmost, y.text);
    });
    return out;
}

std::optional<Decomposition> decompose_units(const SymbolString& u1, const SymbolString& u2, int l_min) {
    if (u1 == u2) {
        if (static_cast<int>(u1.size()) < l_min) return std::nullopt;
        return Decomposition{{Block{0, 0, static_cast<int>(u1.size())}}, {u1}, {}, {}};
    }
    Tiler tiler(u1, u2, l_min);
    const auto& best = tiler.solve(0, 0);
    if (!best || best->count == 0) return std::nullopt;
    Decomposition d;
    d.blocks = best->blocks;
    for (const auto& b : d.blocks) d.common.push_back(u1.substr(b.a, b.len));
    d.residues1 = residues(u1, d.blocks, true);
    d.residues2 = residues(u2, d.blocks, false);
    return d;
}

NodeId allocate_chunk_node(Network& net, const std::vector<NodeId>& members) {
    if (members.empty()) throw ChunkerError(ChunkerError::Code::EmptyMembers, "allocate_chunk_node: no members");
    bool all_sensory = true;
    for (NodeId m : members) all_sensory = all_sensory && net.node(m).kind == Kind::sensory;
    std::string label;
    for (std::size_t i = 0; i < members.size(); ++i) {
        if (i && !all_sensory) label += "|";
        label += node_name(net.node(members[i]));
    }
    if (auto id = net.find_node(label)) {
        const NodeState& ns = net.node(*id);
        bool bound = ns.kind == Kind::chunk;
        for (NodeId m : members) bound = bound && net.find_edge(m, *id).has_value();
        if (!bound) throw ChunkerError(ChunkerError::Code::LabelConflict, "label '" + label + "' bound to other members");
        return *id;
    }
    const NodeId id = ensure_chunk_label(net, label);
    for (NodeId m : members) make_rigid(net, net.ensure_reciprocal(m, id));
    return id;
}

OrderVariants order_variants(Network& net, NodeId a, NodeId b) {
    const std::string la = node_name(net.node(a));
    const std::string lb = node_name(net.node(b));
    if (a == b) throw ChunkerError(ChunkerError::Code::SameNode, "order_variants needs two distinct nodes");
    OrderVariants v{ensure_chunk_label(net, "{" + la + "," + lb + "}"), ensure_chunk_label(net, la + ">" + lb),
                    ensure_chunk_label(net, lb + ">" + la), a, b};
    for (NodeId target : {v.simultaneous, v.ab, v.ba}) {
        make_rigid(net, net.ensure_reciprocal(a, target));
        make_rigid(net, net.ensure_reciprocal(b, target));
    }
    return v;
}

SerialOrderCoder::SerialOrderCoder(Network& net, OrderVariants v, ChunkerParams cp)
    : net_(net), v_(v), cp_(std::move(cp)) {
    cp_.validate();
}

SerialOrderCoder::Fired SerialOrderCoder::present(NodeId first, NodeId second) {
    Fired fired;
    step(first == v_.a, first == v_.b, fired);
    step(second == v_.a, second == v_.b, fired);
    for (int g = 1; g < cp_.window_coact; ++g) step(false, false, fired);
    return fired;
}

void SerialOrderCoder::step(bool a_now, bool b_now, Fired& fired) {
    const Params& p = net_.params();
    act_ab_ *= 1.0 - p.decay_a;
    act_ba_ *= 1.0 - p.decay_a;
    act_sim_ *= 1.0 - p.decay_a / 2.0;

    auto ordered = [&](bool delayed, bool direct) {
        if (delayed && direct) return cp_.order_coincident;
        return cp_.order_single * ((delayed ? 1 : 0) + (direct ? 1 : 0));
    };
    const double in_ab = ordered(a_prev_, b_now);
    const double in_ba = ordered(b_prev_, a_now);
    const double in_sim = cp_.order_sim * ((a_now ? 1 : 0) + (b_now ? 1 : 0));

    auto drive = [&](double& act, double in, NodeId node, bool& flag) {
        act = std::min(p.a_max, act + in);
        if (in > 0.0 && act >= p.fire_threshold_det && !flag) {
            net_.reinforce(ElementRef::node(node));
            flag = true;
        }
        net_.node(node).activation = act;
    };
    drive(act_sim_, in_sim, v_.simultaneous, fired.simultaneous);
    drive(act_ab_, in_ab, v_.ab, fired.ab);
    drive(act_ba_, in_ba, v_.ba, fired.ba);

    a_prev_ = a_now;
    b_prev_ = b_now;
    net_.tick();
}

std::vector<std::pair<NodeId, double>> match(Network& net, const SymbolString& fragment, WorkingBuffer& buf,
                                             const ChunkerParams& cp) {
    struct Hit {
        NodeId id;
        double activation;
        bool exact;
    };
    std::vector<Hit> hits;
    const double a_max = net.params().a_max;
    if (!fragment.empty()) {
        for (const auto& ns : net.nodes()) {
            if (ns.kind != Kind::chunk || ns.label.empty()) continue;
            const SymbolString label = from_utf8(ns.label);
            const int common = longest_common_substring(fragment, label);
            if (common == 0) continue;
            const double m = static_cast<double>(common) / static_cast<double>(std::max(fragment.size(), label.size()));
            const double prior = ns.activation;
            const double act = std::min(a_max, prior + (a_max - prior) * cp.match_gain * m);
            if (act <= prior) continue;
            net.node(ns.id).activation = act;
            hits.push_back({ns.id, act, label == fragment});
        }
    }
    std::sort(hits.begin(), hits.end(), [](const Hit& x, const Hit& y) {
        if (x.activation != y.activation) return x.activation > y.activation;
        if (x.exact != y.exact) return x.exact;
        return x.id < y.id;
    });
    std::vector<std::pair<NodeId, double>> out;
    buf.active_elements.clear();
    for (const auto& h : hits) {
        out.emplace_back(h.id, h.activation);
        if (static_cast<int>(buf.active_elements.size()) < cp.W) buf.active_elements.push_back(h.id);
    }
    return out;
}

double min_priming_to_outrank(double m_primed, double m_rival, double rival_prior, const ChunkerParams& cp) {
    const double a_max = cp.substrate.a_max;
    const double g = cp.match_gain;
    const double rival = rival_prior + (a_max - rival_prior) * g * m_rival;
    return std::max(0.0, (rival - a_max * g * m_primed) / (1.0 - g * m_primed));
}

// ---------------------------------------------------------------------------

Chunker::Chunker(ChunkerParams cp, std::uint64_t seed) : Chunker(Network(cp.substrate, seed), cp) {}

Chunker::Chunker(Network net, ChunkerParams cp) : cp_(std::move(cp)), net_(std::move(net)) {
    cp_.substrate = net_.params();
    cp_.validate();
}

void Chunker::tick_once(const std::map<NodeId, Signal>& external) {
    EventLog events = net_.tick(external);
    log_.insert(log_.end(), std::make_move_iterator(events.begin()), std::make_move_iterator(events.end()));
    refresh_active();
}

void Chunker::refresh_active() {
    buf_.active_elements.clear();
    for (const auto& [label, id] : chunks_) {
        if (net_.node(id).activation > 0.0) buf_.active_elements.push_back(id);
    }
    std::sort(buf_.active_elements.begin(), buf_.active_elements.end());
}

void Chunker::observe_symbol(char32_t symbol) {
    ++clock_;
    if (static_cast<int>(buf_.symbols.size()) == cp_.W) {
        process_oldest();
        buf_.symbols.pop_front();
    }
    buf_.symbols.push_back({symbol, clock_});

    NodeId s;
    if (auto it = sensory_.find(symbol); it != sensory_.end()) {
        s = it->second;
    } else {
        const std::string label = to_utf8(symbol);
        if (auto existing = net_.find_node(label)) {
            if (net_.node(*existing).kind != Kind::sensory) {
                throw ChunkerError(ChunkerError::Code::LabelConflict, "symbol '" + label + "' names a non-sensory node");
            }
            s = *existing;
        } else {
            s = net_.add_node(label, Kind::sensory);
        }
        sensory_.emplace(symbol, s);
    }
    if (prev_sensory_ && *prev_sensory_ != s) {
        net_.reinforce(ElementRef::edge(net_.ensure_reciprocal(*prev_sensory_, s).first));
    }
    prev_sensory_ = s;
    tick_once({{s, Signal{3}}});
}

void Chunker::observe(const SymbolString& stream) {
    for (char32_t c : stream) observe_symbol(c);
}

void Chunker::end_stream() {
    ended_ = true;
    while (!buf_.symbols.empty()) {
        ++clock_;
        process_oldest();
        buf_.symbols.pop_front();
        tick_once({});
    }
    ended_ = false;
    prev_.reset();
    prev_boost_ = false;
    prev_sensory_.reset();
}

void Chunker::silence(int ticks) {
    for (int i = 0; i < ticks; ++i) {
        ++clock_;
        tick_once({});
    }
}

std::vector<std::string> Chunker::fixated_chunks() const {
    std::vector<std::string> out;
    for (const auto& [label, id] : chunks_) {
        if (net_.node(id).fixated) out.push_back(to_utf8(label));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::optional<NodeId> Chunker::chunk(const SymbolString& label) const {
    auto it = chunks_.find(label);
    if (it == chunks_.end()) return std::nullopt;
    return it->second;
}

NodeId Chunker::chunk_node(const SymbolString& label) {
    if (auto it = chunks_.find(label); it != chunks_.end()) return it->second;
    std::vector<NodeId> members;
    for (char32_t c : label) members.push_back(sensory_.at(c));
    const NodeId id = allocate_chunk_node(net_, members);
    chunks_.emplace(label, id);
    chunk_order_.push_back(label);
    return id;
}

EdgeId Chunker::chunk_edge(NodeId src, NodeId dst) {
    const auto pair = net_.ensure_reciprocal(src, dst);
    make_rigid(net_, pair);
    return pair.first;
}

bool Chunker::is_fixated(const std::optional<SymbolString>& label) const {
    if (!label) return false;
    auto it = chunks_.find(*label);
    return it != chunks_.end() && net_.node(it->second).fixated;
}

void Chunker::commit_node(NodeId n, bool boost) {
    const double w = net_.reinforce(ElementRef::node(n), boost);
    NodeState& ns = net_.node(n);
    ns.activation = std::min(net_.params().a_max, ns.activation + activation_delta(3, ns.weight, net_.params()));
    log_.push_back({net_.tick_count(), boost ? "chunk+" : "chunk", ElementRef::node(n).key(), w});
}

void Chunker::commit_edge(NodeId src, NodeId dst, bool boost) {
    const EdgeId e = chunk_edge(src, dst);
    const double w = net_.reinforce(ElementRef::edge(e), boost);
    log_.push_back({net_.tick_count(), boost ? "link+" : "link", ElementRef::edge(e).key(), w});
}

void Chunker::link(const SymbolString& label, bool boost) {
    if (prev_ && *prev_ != label) {
        const bool eb = boost || prev_boost_ || is_fixated(prev_) || is_fixated(label);
        commit_edge(chunks_.at(*prev_), chunks_.at(label), eb);
    }
    prev_ = label;
    prev_boost_ = boost;
}

void Chunker::reactivate(const SymbolString& label, bool boost) {
    const std::vector<SymbolString> order = chunk_order_;
    const int l_min = cp_.l_min;
    auto fits = [&](const SymbolString& piece) { return piece.empty() || static_cast<int>(piece.size()) >= l_min; };
    for (const auto& trace : order) {
        if (trace == label) continue;
        const NodeId tid = chunks_.at(trace);
        if (net_.node(tid).fixated || net_.node(tid).weight <= 0.0) continue;
        for (std::size_t i = trace.find(label); i != SymbolString::npos; i = trace.find(label, i + 1)) {
            const SymbolString pre = trace.substr(0, i);
            const SymbolString suf = trace.substr(i + label.size());
            if (!fits(pre) || !fits(suf)) continue;
            if (!pre.empty()) commit_node(chunk_node(pre), boost);
            if (!suf.empty()) commit_node(chunk_node(suf), boost);
            const NodeId lid = chunks_.at(label);
            if (!pre.empty() && pre != label) commit_edge(chunks_.at(pre), lid, boost);
            if (!suf.empty() && suf != label) commit_edge(lid, chunks_.at(suf), boost);
            const NodeId first = pre.empty() ? lid : chunks_.at(pre);
            const std::vector<EdgeId> incoming = net_.in_edges(tid);
            for (EdgeId e : incoming) {
                const EdgeState& es = net_.edge(e);
                if (es.weight > 0.0 && es.src != first) commit_edge(es.src, first, boost);
            }
            break;
        }
    }
}

void Chunker::process_oldest() {
    const SymbolString text = buf_.text();
    const std::uint64_t head = buf_.symbols.front().tick;
    if (auto it = pending_.find(head); it != pending_.end()) {
        const auto [label, boost] = it->second;
        pending_.erase(it);
        link(label, boost);
        covered_until_ = static_cast<std::int64_t>(head + label.size()) - 1;
        return;
    }
    if (covered_until_ >= static_cast<std::int64_t>(head)) return;

    const auto segs = parse(text);
    auto first = segs.find(0);
    if (first == segs.end()) {
        prev_.reset();
        return;
    }
    const SymbolString label = text.substr(0, first->second.end);
    if (first->second.kind == SegKind::open || static_cast<int>(label.size()) < cp_.l_min) {
        prev_.reset();
        return;
    }

    std::map<int, SymbolString> labels;
    std::map<int, int> starts_by_end;
    for (const auto& [a, seg] : segs) {
        labels[a] = text.substr(a, seg.end - a);
        starts_by_end[seg.end] = a;
    }
    bool head_boost = false;
    for (const auto& [a, seg] : segs) {
        if (seg.kind == SegKind::open || labels[a] != label) continue;
        std::optional<SymbolString> left;
        if (a == 0) {
            left = prev_;
        } else if (auto it = starts_by_end.find(a); it != starts_by_end.end()) {
            left = labels[it->second];
        }
        std::optional<SymbolString> right;
        if (auto it = labels.find(a + static_cast<int>(label.size())); it != labels.end()) right = it->second;
        const bool boost = is_fixated(left) || is_fixated(right);
        if (a == 0) {
            head_boost = boost;
        } else {
            pending_[buf_.symbols[a].tick] = {label, boost};
        }
        commit_node(chunk_node(label), boost);
        reactivate(label, boost);
    }
    link(label, head_boost);
    covered_until_ = static_cast<std::int64_t>(head + label.size()) - 1;
}

std::vector<Chunker::Trace> Chunker::traces() const {
    std::vector<Trace> out;
    for (const auto& [label, id] : chunks_) {
        const NodeState& ns = net_.node(id);
        if (ns.weight > 0.0) out.push_back({label, id, ns.weight, ns.fixated});
    }
    std::sort(out.begin(), out.end(), [](const Trace& x, const Trace& y) {
        return std::make_tuple(-x.weight, -static_cast<long>(x.label.size()), x.label) <
               std::make_tuple(-y.weight, -static_cast<long>(y.label.size()), y.label);
    });
    return out;
}

std::vector<int> Chunker::span_occurrences(const SymbolString& text, const Spans& spans, const SymbolString& sub) const {
    std::vector<int> occ;
    const int len = static_cast<int>(sub.size());
    for (const auto& [a, b] : spans) {
        int i = a;
        while (i + len <= b) {
            if (text.compare(i, len, sub) == 0) {
                occ.push_back(i);
                i += len;
            } else {
                ++i;
            }
        }
    }
    return occ;
}

bool Chunker::valid(int n, const Spans& spans, int len, const std::vector<int>& occ) const {
    auto short_gap = [&](int g) { return g != 0 && g < cp_.l_min; };
    for (const auto& [a, b] : spans) {
        int pos = a;
        bool any = false;
        for (int o : occ) {
            if (o < a || o >= b) continue;
            any = true;
            if (short_gap(o - pos)) return false;
            pos = o + len;
        }
        if (!any) continue;
        const bool open_tail = b == n && !ended_;
        if (short_gap(b - pos) && !open_tail) return false;
    }
    return true;
}

Chunker::Spans Chunker::carve(const Spans& spans, const std::vector<int>& occ, int len) {
    Spans out;
    for (const auto& [a, b] : spans) {
        int pos = a;
        for (int o : occ) {
            if (o < a || o >= b) continue;
            if (o > pos) out.emplace_back(pos, o);
            pos = o + len;
        }
        if (pos < b) out.emplace_back(pos, b);
    }
    return out;
}

std::map<int, Chunker::Segment> Chunker::parse(const SymbolString& text) const {
    const int n = static_cast<int>(text.size());
    Spans spans{{0, n}};
    std::map<int, Segment> segs;
    const std::vector<Trace> known = traces();

    auto accept = [&](const std::vector<int>& occ, int len, SegKind kind) {
        for (int o : occ) segs[o] = {o + len, kind};
        spans = carve(spans, occ, len);
    };

    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& t : known) {
            const auto occ = span_occurrences(text, spans, t.label);
            if (occ.empty()) continue;
            const int len = static_cast<int>(t.label.size());
            if (valid(n, spans, len, occ)) {
                accept(occ, len, SegKind::match);
                changed = true;
                break;
            }
        }
    }

    for (;;) {
        std::set<SymbolString> subs;
        for (const auto& [a, b] : spans) {
            for (int i = a; i < b; ++i) {
                for (int j = i + cp_.l_min; j <= b; ++j) subs.insert(text.substr(i, j - i));
            }
        }
        using Key = std::tuple<int, int, int, int, SymbolString>;
        std::vector<std::pair<Key, std::vector<int>>> ranked;
        for (const auto& sub : subs) {
            auto occ = span_occurrences(text, spans, sub);
            if (occ.size() < 2) continue;
            const int len = static_cast<int>(sub.size());
            const int count = static_cast<int>(occ.size());
            ranked.push_back({Key{-count * len, -len, -count, occ.front(), sub}, std::move(occ)});
        }
        std::sort(ranked.begin(), ranked.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
        bool accepted = false;
        for (const auto& [key, occ] : ranked) {
            const int len = static_cast<int>(std::get<4>(key).size());
            if (!valid(n, spans, len, occ)) continue;
            accept(occ, len, SegKind::repeat);
            accepted = true;
            break;
        }
        if (!accepted) break;
    }

    for (const auto& [a, b] : spans) segs[a] = {b, (b == n && !ended_) ? SegKind::open : SegKind::unit};

    std::vector<const Trace*> loose;
    for (const auto& t : known) {
        if (!t.fixated) loose.push_back(&t);
    }
    std::map<int, Segment> out;
    for (const auto& [a, seg] : segs) {
        out[a] = seg;
        if (seg.kind != SegKind::repeat && seg.kind != SegKind::unit) continue;
        const SymbolString u = text.substr(a, seg.end - a);
        for (const Trace* t : loose) {
            if (t->label == u) continue;
            const auto d = decompose_units(t->label, u, cp_.l_min);
            if (!d) continue;
            out.erase(a);
            int pos = a;
            auto add_piece = [&](int len) {
                out[pos] = {pos + len, SegKind::split};
                pos += len;
            };
            int cursor = 0;
            for (const auto& blk : d->blocks) {
                if (blk.b > cursor) add_piece(blk.b - cursor);
                add_piece(blk.len);
                cursor = blk.b + blk.len;
            }
            if (cursor < static_cast<int>(u.size())) add_piece(static_cast<int>(u.size()) - cursor);
            break;
        }
    }
    return out;
}

}  // namespace tnet
