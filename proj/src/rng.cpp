#include "mera/rng.hpp"

#include <boost/random/beta_distribution.hpp>
#include <boost/random/uniform_int_distribution.hpp>
#include <boost/random/uniform_real_distribution.hpp>

namespace mera {

Rng::Rng(std::uint64_t seed) : engine_(seed) {}

std::uint64_t Rng::next() { return engine_(); }

double Rng::uniform(double lo, double hi) {
    if (!(hi > lo)) return lo;
    boost::random::uniform_real_distribution<double> dist(lo, hi);
    return dist(engine_);
}

std::size_t Rng::index(std::size_t n) {
    if (n <= 1) return 0;
    boost::random::uniform_int_distribution<std::size_t> dist(0, n - 1);
    return dist(engine_);
}

double Rng::beta(double alpha, double beta) {
    boost::random::beta_distribution<double> dist(alpha, beta);
    return dist(engine_);
}

namespace {

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace

std::uint64_t mix_seed(std::initializer_list<std::uint64_t> parts) {
    std::uint64_t h = 0x6a09e667f3bcc908ULL;
    for (std::uint64_t p : parts) h = splitmix(h ^ splitmix(p));
    return h;
}

std::uint64_t hash_id(std::string_view id) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : id) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

} // namespace mera
