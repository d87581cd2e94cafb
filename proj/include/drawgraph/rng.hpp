#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace drawgraph {

// Seeded generator with hand-specified draw helpers so that streams are
// identical across standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform in [0, 1).
    double uniform() { return double(gen_() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    // Uniform integer in [a, b], inclusive.
    int uniform_int(int a, int b) {
        return a + int(next_u64() % std::uint64_t(b - a + 1));
    }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (int i = int(v.size()) - 1; i > 0; --i) std::swap(v[std::size_t(i)], v[std::size_t(uniform_int(0, i))]);
    }

private:
    std::mt19937_64 gen_;
};

} // namespace drawgraph
