#include "tnet/rng.hpp"

namespace tnet {

namespace {

std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

std::uint64_t Rng::at(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    return mix(seed ^ mix(stream ^ mix(counter)));
}

}  // namespace tnet
