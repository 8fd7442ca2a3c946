#pragma once

#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tnet {

using StateId = std::string;
using SymbolId = std::string;

/// One (next state, output) outcome of a transition row.
struct Outcome {
    StateId state;
    SymbolId output;
    double p = 0.0;
};

/// A finite distribution over (state, output) pairs.
struct Distribution {
    std::vector<Outcome> entries;

    double probability(const StateId& s, const SymbolId& out) const;
    double total() const;
};

using RowKey = std::pair<StateId, SymbolId>;

/// Raw description: S, input alphabet, output alphabet and the table F.
struct TransducerSpec {
    std::set<StateId> states;
    std::set<SymbolId> inputs;
    std::set<SymbolId> outputs;
    std::map<RowKey, Distribution> transition;
};

class TransducerError : public std::runtime_error {
public:
    enum class Code { NonStochastic, UnknownSymbol, MissingRow, AlphabetMismatch };

    TransducerError(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Code code() const { return code_; }

private:
    Code code_;
};

inline constexpr double kStochasticTolerance = 1e-9;

/// Validated, immutable probabilistic transducer.
class Transducer {
public:
    const TransducerSpec& spec() const { return spec_; }
    const std::set<StateId>& states() const { return spec_.states; }
    const std::set<SymbolId>& inputs() const { return spec_.inputs; }
    const std::set<SymbolId>& outputs() const { return spec_.outputs; }

    bool has_row(const StateId& s, const SymbolId& in) const;

    /// Maps u in [0,1) to an outcome by inverse-CDF over the row order.
    const Outcome& sample(const StateId& s, const SymbolId& in, double u) const;

private:
    friend Transducer make_transducer(TransducerSpec spec);
    explicit Transducer(TransducerSpec spec) : spec_(std::move(spec)) {}

    TransducerSpec spec_;
};

/// Validates `spec`; throws NonStochastic or UnknownSymbol.
Transducer make_transducer(TransducerSpec spec);

/// Exact row for (s, in); throws MissingRow.
Distribution output_distribution(const Transducer& t, const StateId& s, const SymbolId& in);

/// Draws one (state, output) pair, consuming exactly one value from `rng`.
template <class URBG>
std::pair<StateId, SymbolId> step(const Transducer& t, const StateId& s, const SymbolId& in, URBG& rng) {
    if (!t.has_row(s, in)) {
        throw TransducerError(TransducerError::Code::MissingRow, "no transition for (" + s + ", " + in + ")");
    }
    const double u = std::generate_canonical<double, 53>(rng);
    const Outcome& o = t.sample(s, in, u);
    return {o.state, o.output};
}

/// Name of the product state (s1, s2).
std::string product_state(const StateId& s1, const StateId& s2);

/// Sequential composition: t1's outputs feed t2's inputs.
/// Throws AlphabetMismatch unless t1.outputs == t2.inputs.
Transducer compose(const Transducer& t1, const Transducer& t2);

}  // namespace tnet
