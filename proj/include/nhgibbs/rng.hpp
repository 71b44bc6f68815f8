#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace nhg {

inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Counter-based generator: the i-th output is a fixed hash of (key, i), so a
// stream is fully described by two integers and can be split into
// independent named sub-streams without shared state. Distributions are
// implemented here rather than through <random> so that the same seed gives
// the same numbers with every standard library.
class CounterRng {
public:
    using result_type = std::uint64_t;

    explicit CounterRng(std::uint64_t seed = 0, std::uint64_t stream = 0)
        : key_(mix64(seed ^ mix64(stream + 0x632be59bd9b4e019ull))) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type{0}; }

    result_type operator()() { return mix64(key_ + mix64(counter_++)); }

    // Independent child stream identified by an integer or a name.
    CounterRng split(std::uint64_t stream) const {
        CounterRng child;
        child.key_ = mix64(key_ ^ mix64(stream ^ 0xd1b54a32d192ed03ull));
        return child;
    }

    CounterRng split(std::string_view name) const {
        std::uint64_t h = 1469598103934665603ull;
        for (char c : name) {
            h ^= static_cast<unsigned char>(c);
            h *= 1099511628211ull;
        }
        return split(h);
    }

    // Uniform on (0, 1].
    double uniform() { return (static_cast<double>((*this)() >> 11) + 1.0) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform on {0, ..., n-1}.
    std::uint64_t index(std::uint64_t n) {
        unsigned __int128 m = static_cast<unsigned __int128>((*this)()) * n;
        return static_cast<std::uint64_t>(m >> 64);
    }

    double normal() {
        double u1 = uniform();
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    std::uint64_t counter() const { return counter_; }
    std::uint64_t key() const { return key_; }

    friend bool operator==(const CounterRng&, const CounterRng&) = default;

private:
    std::uint64_t key_ = 0;
    std::uint64_t counter_ = 0;
};

}  // namespace nhg
