#pragma once

#include <cstdint>
#include <limits>

namespace tnet {

// Counter-based generator: every output is a pure function of
// (seed, stream, counter), so independent elements can draw without
// sharing state and replays need only the key.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed = 0, std::uint64_t stream = 0)
        : seed_(seed), stream_(stream) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() { return at(seed_, stream_, counter_++); }

    double uniform() { return to_unit(operator()()); }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t counter() const { return counter_; }

    static std::uint64_t at(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter);

    // Uniform in [0, 1) for one (seed, element, tick) key.
    static double keyed(std::uint64_t seed, std::uint64_t element, std::uint64_t tick) {
        return to_unit(at(seed, element, tick));
    }

    static double to_unit(std::uint64_t x) { return static_cast<double>(x >> 11) * 0x1.0p-53; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t counter_ = 0;
};

}  // namespace tnet
