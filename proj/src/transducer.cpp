#include "tnet/transducer.hpp"

#include <cmath>

namespace tnet {

namespace {

using Code = TransducerError::Code;

void validate_row(const TransducerSpec& spec, const RowKey& key, const Distribution& row) {
    const std::string where = "row (" + key.first + ", " + key.second + ")";
    if (!spec.states.count(key.first)) {
        throw TransducerError(Code::UnknownSymbol, where + ": undeclared state " + key.first);
    }
    if (!spec.inputs.count(key.second)) {
        throw TransducerError(Code::UnknownSymbol, where + ": undeclared input " + key.second);
    }
    std::set<RowKey> seen;
    double sum = 0.0;
    for (const auto& e : row.entries) {
        if (!spec.states.count(e.state)) {
            throw TransducerError(Code::UnknownSymbol, where + ": undeclared state " + e.state);
        }
        if (!spec.outputs.count(e.output)) {
            throw TransducerError(Code::UnknownSymbol, where + ": undeclared output " + e.output);
        }
        if (!(e.p >= 0.0 && e.p <= 1.0)) {
            throw TransducerError(Code::NonStochastic, where + ": probability outside [0,1]");
        }
        if (!seen.insert({e.state, e.output}).second) {
            throw TransducerError(Code::NonStochastic, where + ": duplicate outcome (" + e.state + ", " + e.output + ")");
        }
        sum += e.p;
    }
    if (std::fabs(sum - 1.0) > kStochasticTolerance) {
        throw TransducerError(Code::NonStochastic, where + ": sums to " + std::to_string(sum));
    }
}

}  // namespace

double Distribution::probability(const StateId& s, const SymbolId& out) const {
    for (const auto& e : entries) {
        if (e.state == s && e.output == out) return e.p;
    }
    return 0.0;
}

double Distribution::total() const {
    double sum = 0.0;
    for (const auto& e : entries) sum += e.p;
    return sum;
}

bool Transducer::has_row(const StateId& s, const SymbolId& in) const {
    return spec_.transition.count({s, in}) != 0;
}

const Outcome& Transducer::sample(const StateId& s, const SymbolId& in, double u) const {
    auto it = spec_.transition.find({s, in});
    if (it == spec_.transition.end()) {
        throw TransducerError(Code::MissingRow, "no transition for (" + s + ", " + in + ")");
    }
    const auto& entries = it->second.entries;
    double acc = 0.0;
    const Outcome* last = nullptr;
    for (const auto& e : entries) {
        if (e.p <= 0.0) continue;
        last = &e;
        acc += e.p;
        if (u < acc) return e;
    }
    // Rounding can leave u just above the accumulated mass.
    return *last;
}

Transducer make_transducer(TransducerSpec spec) {
    for (const auto& [key, row] : spec.transition) validate_row(spec, key, row);
    return Transducer(std::move(spec));
}

Distribution output_distribution(const Transducer& t, const StateId& s, const SymbolId& in) {
    auto it = t.spec().transition.find({s, in});
    if (it == t.spec().transition.end()) {
        throw TransducerError(Code::MissingRow, "no transition for (" + s + ", " + in + ")");
    }
    return it->second;
}

std::string product_state(const StateId& s1, const StateId& s2) {
    return "(" + s1 + "," + s2 + ")";
}

Transducer compose(const Transducer& t1, const Transducer& t2) {
    if (t1.outputs() != t2.inputs()) {
        throw TransducerError(Code::AlphabetMismatch, "t1 outputs differ from t2 inputs");
    }
    TransducerSpec out;
    out.inputs = t1.inputs();
    out.outputs = t2.outputs();
    for (const auto& s1 : t1.states()) {
        for (const auto& s2 : t2.states()) out.states.insert(product_state(s1, s2));
    }

    const auto& rows1 = t1.spec().transition;
    const auto& rows2 = t2.spec().transition;
    for (const auto& [key1, row1] : rows1) {
        const auto& [s1, sigma1] = key1;
        for (const auto& s2 : t2.states()) {
            std::map<RowKey, double> acc;
            bool complete = true;
            for (const auto& e1 : row1.entries) {
                if (e1.p <= 0.0) continue;
                auto it2 = rows2.find({s2, e1.output});
                if (it2 == rows2.end()) {
                    complete = false;
                    break;
                }
                for (const auto& e2 : it2->second.entries) {
                    if (e2.p <= 0.0) continue;
                    acc[{product_state(e1.state, e2.state), e2.output}] += e1.p * e2.p;
                }
            }
            // A row whose intermediate signal has no continuation in t2 is
            // left undefined; stepping it reports MissingRow.
            if (!complete) continue;
            Distribution row;
            for (const auto& [k, p] : acc) row.entries.push_back({k.first, k.second, p});
            out.transition[{product_state(s1, s2), sigma1}] = std::move(row);
        }
    }
    return make_transducer(std::move(out));
}

}  // namespace tnet
