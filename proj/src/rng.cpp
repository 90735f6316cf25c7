#include "rigsim/rng.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace rigsim {

std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
}

Seed Seed::derive(std::uint64_t tag) const {
    return Seed{root, mix64(stream ^ mix64(tag + 0x632BE59BD9B4E019ULL))};
}

CounterRng::CounterRng(Seed seed)
    : key_(mix64(mix64(seed.root + 0x2545F4914F6CDD1DULL) ^ (seed.stream * 0xD1B54A32D192ED03ULL))) {}

std::uint64_t CounterRng::below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("CounterRng::below: bound must be positive");
    unsigned __int128 product = static_cast<unsigned __int128>((*this)()) * bound;
    auto low = static_cast<std::uint64_t>(product);
    if (low < bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        while (low < threshold) {
            product = static_cast<unsigned __int128>((*this)()) * bound;
            low = static_cast<std::uint64_t>(product);
        }
    }
    return static_cast<std::uint64_t>(product >> 64);
}

namespace {

constexpr std::size_t kFactorialTable = 256;

const std::array<double, kFactorialTable>& factorial_table() {
    static const auto table = [] {
        std::array<double, kFactorialTable> t{};
        t[0] = 0.0;
        for (std::size_t k = 1; k < kFactorialTable; ++k) {
            t[k] = t[k - 1] + std::log(static_cast<double>(k));
        }
        return t;
    }();
    return table;
}

std::uint64_t binomial_inversion(CounterRng& rng, std::uint64_t trials, double q) {
    // pmf recurrence f(k+1) = f(k) * (n-k)/(k+1) * q/(1-q)
    const double ratio = q / (1.0 - q);
    double pmf = std::exp(static_cast<double>(trials) * std::log1p(-q));
    double u = rng.uniform();
    std::uint64_t k = 0;
    while (u > pmf && k < trials) {
        u -= pmf;
        pmf *= ratio * static_cast<double>(trials - k) / static_cast<double>(k + 1);
        ++k;
    }
    return k;
}

std::uint64_t binomial_btrs(CounterRng& rng, std::uint64_t trials, double q) {
    const double n = static_cast<double>(trials);
    const double spq = std::sqrt(n * q * (1.0 - q));
    const double b = 1.15 + 2.53 * spq;
    const double a = -0.0873 + 0.0248 * b + 0.01 * q;
    const double c = n * q + 0.5;
    const double v_r = 0.92 - 4.2 / b;
    const double alpha = (2.83 + 5.1 / b) * spq;
    const double lpq = std::log(q / (1.0 - q));
    const auto mode = static_cast<std::uint64_t>(std::floor((n + 1.0) * q));
    const double h = log_factorial(mode) + log_factorial(trials - mode);

    for (;;) {
        const double u = rng.uniform() - 0.5;
        const double v = rng.uniform();
        const double us = 0.5 - std::fabs(u);
        const double kd = std::floor((2.0 * a / us + b) * u + c);
        if (kd < 0.0 || kd > n) continue;
        const auto k = static_cast<std::uint64_t>(kd);
        if (us >= 0.07 && v <= v_r) return k;
        const double lhs = std::log(v * alpha / (a / (us * us) + b));
        const double rhs = h - log_factorial(k) - log_factorial(trials - k) +
                           (kd - static_cast<double>(mode)) * lpq;
        if (lhs <= rhs) return k;
    }
}

std::uint64_t poisson_inversion(CounterRng& rng, double mean) {
    const double p0 = std::exp(-mean);
    for (;;) {
        double u = rng.uniform();
        double pmf = p0;
        std::uint64_t k = 0;
        while (u > pmf) {
            u -= pmf;
            ++k;
            pmf *= mean / static_cast<double>(k);
            if (pmf <= 0.0) break;
        }
        if (pmf > 0.0 || u <= 0.0) return k;
    }
}

std::uint64_t poisson_ptrs(CounterRng& rng, double mean) {
    const double slam = std::sqrt(mean);
    const double loglam = std::log(mean);
    const double b = 0.931 + 2.53 * slam;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);

    for (;;) {
        const double u = rng.uniform() - 0.5;
        const double v = rng.uniform();
        const double us = 0.5 - std::fabs(u);
        const double kd = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= v_r) return static_cast<std::uint64_t>(kd);
        if (kd < 0.0 || (us < 0.013 && v > us)) continue;
        const auto k = static_cast<std::uint64_t>(kd);
        if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
            -mean + kd * loglam - log_factorial(k)) {
            return k;
        }
    }
}

}  // namespace

double log_factorial(std::uint64_t k) {
    if (k < kFactorialTable) return factorial_table()[k];
    const double x = static_cast<double>(k);
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    return x * std::log(x) - x + 0.5 * std::log(2.0 * M_PI * x) +
           inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 / 1260.0));
}

double log_choose(std::uint64_t n, std::uint64_t k) {
    if (k > n) return -std::numeric_limits<double>::infinity();
    return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

std::uint64_t sample_binomial(CounterRng& rng, std::uint64_t trials, double q) {
    if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("sample_binomial: q outside [0,1]");
    if (trials == 0 || q == 0.0) return 0;
    if (q == 1.0) return trials;
    if (q > 0.5) return trials - sample_binomial(rng, trials, 1.0 - q);
    if (static_cast<double>(trials) * q < 10.0) return binomial_inversion(rng, trials, q);
    return binomial_btrs(rng, trials, q);
}

std::uint64_t sample_poisson(CounterRng& rng, double mean) {
    if (!(mean >= 0.0) || !std::isfinite(mean)) {
        throw std::invalid_argument("sample_poisson: mean must be finite and nonnegative");
    }
    if (mean == 0.0) return 0;
    if (mean < 10.0) return poisson_inversion(rng, mean);
    return poisson_ptrs(rng, mean);
}

std::vector<std::uint32_t> sample_distinct(CounterRng& rng, std::uint32_t universe,
                                           std::uint32_t count) {
    if (count > universe) throw std::invalid_argument("sample_distinct: count exceeds universe");
    std::vector<std::uint32_t> chosen;
    chosen.reserve(count);
    if (count == universe) {
        for (std::uint32_t i = 0; i < universe; ++i) chosen.push_back(i);
        return chosen;
    }
    // Floyd: for j = N-k .. N-1 pick t in [0, j]; take t unless taken, then j.
    if (static_cast<std::uint64_t>(universe) <= 64ULL * count + 1024) {
        std::vector<bool> taken(universe, false);
        for (std::uint32_t j = universe - count; j < universe; ++j) {
            auto t = static_cast<std::uint32_t>(rng.below(static_cast<std::uint64_t>(j) + 1));
            if (taken[t]) t = j;
            taken[t] = true;
            chosen.push_back(t);
        }
    } else {
        std::unordered_set<std::uint32_t> taken;
        taken.reserve(count * 2);
        for (std::uint32_t j = universe - count; j < universe; ++j) {
            auto t = static_cast<std::uint32_t>(rng.below(static_cast<std::uint64_t>(j) + 1));
            if (!taken.insert(t).second) {
                t = j;
                taken.insert(t);
            }
            chosen.push_back(t);
        }
    }
    std::sort(chosen.begin(), chosen.end());
    return chosen;
}

}  // namespace rigsim
