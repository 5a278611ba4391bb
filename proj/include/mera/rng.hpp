#pragma once

#include <cstdint>
#include <initializer_list>
#include <string_view>
#include <vector>

#include <boost/random/mersenne_twister.hpp>

namespace mera {

// Seeded random source. Every stochastic choice in the simulator goes
// through this type so that runs replay bit-for-bit.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next();
    double uniform(double lo, double hi);
    // Uniform integer in [0, n).
    std::size_t index(std::size_t n);
    double beta(double alpha, double beta);

    // Fisher-Yates, fixed algorithm.
    template <typename T>
    void shuffle(std::vector<T>& values) {
        for (std::size_t i = values.size(); i > 1; --i) {
            std::size_t j = index(i);
            std::swap(values[i - 1], values[j]);
        }
    }

private:
    boost::random::mt19937_64 engine_;
};

// Combines seed components (splitmix64 finalizer chain).
std::uint64_t mix_seed(std::initializer_list<std::uint64_t> parts);

// Stable 64-bit hash of an identifier (FNV-1a).
std::uint64_t hash_id(std::string_view id);

} // namespace mera
