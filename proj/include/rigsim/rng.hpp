#ifndef RIGSIM_RNG_HPP
#define RIGSIM_RNG_HPP

#include <cstdint>
#include <limits>
#include <vector>

namespace rigsim {

/// Identifies one independent random substream: (root, stream) fully
/// determines every value drawn through it.
struct Seed {
    std::uint64_t root = 0;
    std::uint64_t stream = 0;

    /// Child substream, e.g. for a sub-task of one Monte Carlo sample.
    [[nodiscard]] Seed derive(std::uint64_t tag) const;

    friend bool operator==(const Seed&, const Seed&) = default;
};

[[nodiscard]] std::uint64_t mix64(std::uint64_t x);

/// Counter-based 64-bit generator. The i-th output is
/// mix64(key + i * golden_gamma) with key = H(root, stream), so substreams
/// need no coordination and can be created in any order on any thread.
/// Satisfies UniformRandomBitGenerator.
class CounterRng {
public:
    using result_type = std::uint64_t;

    explicit CounterRng(Seed seed);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        counter_ += 1;
        return mix64(key_ + counter_ * 0x9E3779B97F4A7C15ULL);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Uniform double in (0, 1).
    double uniform_open() {
        double u;
        do {
            u = uniform();
        } while (u == 0.0);
        return u;
    }

    /// Uniform integer in [0, bound), bound >= 1 (Lemire's nearly divisionless method).
    std::uint64_t below(std::uint64_t bound);

    bool bernoulli(double p) { return uniform() < p; }

    [[nodiscard]] std::uint64_t draws() const { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

/// ln(k!) for k >= 0; tabulated below 256, Stirling series above.
[[nodiscard]] double log_factorial(std::uint64_t k);

/// ln C(n, k).
[[nodiscard]] double log_choose(std::uint64_t n, std::uint64_t k);

/// Bin(trials, q): sequential inversion when the mean is below 10,
/// otherwise Hormann's BTRS transformed rejection.
std::uint64_t sample_binomial(CounterRng& rng, std::uint64_t trials, double q);

/// Po(mean): inversion below mean 10, PTRS transformed rejection otherwise.
std::uint64_t sample_poisson(CounterRng& rng, double mean);

/// `count` distinct values from [0, universe), sorted ascending (Floyd).
std::vector<std::uint32_t> sample_distinct(CounterRng& rng, std::uint32_t universe,
                                           std::uint32_t count);

}  // namespace rigsim

#endif  // RIGSIM_RNG_HPP
