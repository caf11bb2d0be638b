#include "qcomp/tight_example.hpp"

#include <cmath>

#include "qcomp/error.hpp"

namespace qcomp {

namespace {

using i128 = __int128;

bool far_enough(i128 gap, std::uint64_t n) { return gap >= 0 && gap * gap >= 4 * static_cast<i128>(n); }

void require_regime(std::uint64_t t, std::uint64_t root) {
    if (root < 2)
        throw InvalidInput("n must be a perfect square of at least 4");
    if (t % 2 == 0)
        throw InvalidInput("the number of probes t must be odd");
    if (t > root)
        throw InvalidInput("t = " + std::to_string(t) + " exceeds sqrt(n) = " + std::to_string(root));
}

std::uint64_t require_square(std::uint64_t n) {
    const auto r = exact_sqrt(n);
    if (!r)
        throw InvalidInput("n = " + std::to_string(n) + " is not a perfect square");
    return *r;
}

constexpr std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace

bool at_most_low_threshold(std::uint64_t n, std::uint64_t w) {
    return far_enough(static_cast<i128>(n) - 2 * static_cast<i128>(w), n);
}

bool at_least_high_threshold(std::uint64_t n, std::uint64_t w) {
    return far_enough(2 * static_cast<i128>(w) - static_cast<i128>(n), n);
}

GValue g0_from_weight(std::uint64_t n, std::uint64_t w) {
    if (at_most_low_threshold(n, w))
        return GValue::zero;
    if (at_least_high_threshold(n, w))
        return GValue::one;
    return GValue::star;
}

GValue g0_eval(const Bitstring& x) { return g0_from_weight(x.size(), x.weight()); }

bool f0_contains(const Bitstring& z, const Bitstring& a) {
    if (z.size() != a.size())
        throw InvalidInput("z and a must have the same length");
    return at_most_low_threshold(z.size(), (z ^ a).weight());
}

std::optional<std::uint64_t> exact_sqrt(std::uint64_t n) {
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
    while (r > 0 && r * r > n)
        --r;
    while ((r + 1) * (r + 1) <= n)
        ++r;
    if (r * r != n)
        return std::nullopt;
    return r;
}

Rational exact_probe_advantage(std::uint64_t n, std::uint64_t t) {
    const std::uint64_t root = require_square(n);
    require_regime(t, root);
    const Rational p = Rational(1, 2) + Rational(1, static_cast<std::int64_t>(root));
    const Rational q = Rational(1) - p;
    Rational total(0);
    for (std::uint64_t k = (t + 1) / 2; k <= t; ++k)
        total += binomial(static_cast<unsigned>(t), static_cast<unsigned>(k)) * pow(p, static_cast<unsigned>(k)) *
                 pow(q, static_cast<unsigned>(t - k));
    if (total <= advantage_bound(n, t))
        throw ConsistencyError("probe advantage " + total.str() + " does not exceed 1/2 + t/(8 sqrt n)");
    return total;
}

Rational advantage_bound(std::uint64_t n, std::uint64_t t) {
    const std::uint64_t root = require_square(n);
    return Rational(1, 2) + Rational(static_cast<std::int64_t>(t), 8 * static_cast<std::int64_t>(root));
}

ProbeStream::ProbeStream(std::uint64_t seed, std::uint64_t trial, std::uint64_t block)
    : key_(mix(mix(mix(seed) ^ trial) ^ (block * 0xd1b54a32d192ed03ULL))) {}

std::uint64_t ProbeStream::next() { return mix(key_ ^ mix(counter_++)); }

std::uint64_t ProbeStream::uniform(std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    for (;;) {
        const std::uint64_t r = next();
        if (r < limit)
            return r % n;
    }
}

ProtocolRun run_probe_protocol(const std::vector<Bitstring>& blocks, std::uint64_t t, std::uint64_t seed,
                               std::uint64_t trial) {
    const std::size_t n = blocks.size();
    if (t % 2 == 0)
        throw InvalidInput("the number of probes t must be odd");
    std::vector<std::uint8_t> answer(n);
    ProtocolRun run;
    for (std::size_t i = 0; i < n; ++i) {
        if (blocks[i].size() != n)
            throw InvalidInput("every block must have n bits");
        ProbeStream s(seed, trial, i);
        std::uint64_t ones = 0;
        for (std::uint64_t k = 0; k < t; ++k) {
            ones += blocks[i].at(s.uniform(n) + 1);
            ++run.queries;
        }
        answer[i] = 2 * ones > t;
    }
    run.answer = Bitstring(std::move(answer));
    return run;
}

const char* to_string(InputFamily f) {
    switch (f) {
    case InputFamily::boundary_zero: return "boundary-zero";
    case InputFamily::boundary_one: return "boundary-one";
    case InputFamily::mixed_boundary: return "mixed-boundary";
    case InputFamily::all_zero: return "all-zero";
    case InputFamily::all_one: return "all-one";
    }
    return "?";
}

InputFamily input_family_from_string(const std::string& s) {
    for (auto f : {InputFamily::boundary_zero, InputFamily::boundary_one, InputFamily::mixed_boundary,
                   InputFamily::all_zero, InputFamily::all_one})
        if (s == to_string(f))
            return f;
    throw InvalidInput("unknown input family '" + s + "'");
}

std::pair<bool, std::uint64_t> family_block(std::uint64_t n, InputFamily family, std::uint64_t i) {
    // Largest weight with g₀ = 0 and smallest with g₀ = 1.
    std::uint64_t low = n / 2;
    while (low > 0 && !at_most_low_threshold(n, low))
        --low;
    std::uint64_t high = (n + 1) / 2;
    while (high < n && !at_least_high_threshold(n, high))
        ++high;
    switch (family) {
    case InputFamily::boundary_zero: return {false, low};
    case InputFamily::boundary_one: return {true, high};
    case InputFamily::mixed_boundary: return i % 2 ? std::pair{true, high} : std::pair{false, low};
    case InputFamily::all_zero: return {false, 0};
    case InputFamily::all_one: return {true, n};
    }
    throw InvalidInput("unknown input family");
}

namespace {

struct Plan {
    std::vector<std::uint8_t> z;
    std::vector<std::uint64_t> weight;
};

Plan make_plan(std::uint64_t n, std::uint64_t t, std::uint64_t trials, InputFamily family) {
    const std::uint64_t root = require_square(n);
    require_regime(t, root);
    if (trials < 1000)
        throw InvalidInput("at least 1000 trials are required");
    Plan plan;
    for (std::uint64_t i = 0; i < n; ++i) {
        const auto [z, w] = family_block(n, family, i);
        plan.z.push_back(z);
        plan.weight.push_back(w);
    }
    return plan;
}

/// One execution of the protocol on the plan's input; true when it errs.
bool trial_errs(const Plan& plan, std::uint64_t n, std::uint64_t t, std::uint64_t seed, std::uint64_t trial) {
    std::uint64_t wrong = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
        ProbeStream s(seed, trial, i);
        std::uint64_t ones = 0;
        for (std::uint64_t k = 0; k < t; ++k)
            ones += s.uniform(n) < plan.weight[i];
        const bool a = 2 * ones > t;
        wrong += a != static_cast<bool>(plan.z[i]);
    }
    return !at_most_low_threshold(n, wrong);
}

MonteCarloResult summarize(std::uint64_t n, std::uint64_t t, std::uint64_t trials, std::uint64_t seed,
                           InputFamily family, std::uint64_t errors) {
    MonteCarloResult r;
    r.n = n;
    r.t = t;
    r.trials = trials;
    r.seed = seed;
    r.family = family;
    r.errors = errors;
    r.estimate = static_cast<double>(errors) / static_cast<double>(trials);
    std::tie(r.ci_low, r.ci_high) = wilson_interval(errors, trials);
    r.chernoff_bound = chernoff_bound(t);
    r.queries_per_run = n * t;
    return r;
}

} // namespace

MonteCarloResult monte_carlo_error(std::uint64_t n, std::uint64_t t, std::uint64_t trials, std::uint64_t seed,
                                   InputFamily family) {
    const Plan plan = make_plan(n, t, trials, family);
    std::uint64_t errors = 0;
    const auto total = static_cast<std::int64_t>(trials);
#pragma omp parallel for schedule(static) reduction(+ : errors)
    for (std::int64_t k = 0; k < total; ++k)
        errors += trial_errs(plan, n, t, seed, static_cast<std::uint64_t>(k));
    return summarize(n, t, trials, seed, family, errors);
}

namespace reference {

MonteCarloResult monte_carlo_error(std::uint64_t n, std::uint64_t t, std::uint64_t trials, std::uint64_t seed,
                                   InputFamily family) {
    const Plan plan = make_plan(n, t, trials, family);
    std::uint64_t errors = 0;
    for (std::uint64_t k = 0; k < trials; ++k)
        errors += trial_errs(plan, n, t, seed, k);
    return summarize(n, t, trials, seed, family, errors);
}

} // namespace reference

std::pair<double, double> wilson_interval(std::uint64_t k, std::uint64_t n) {
    if (n == 0)
        throw InvalidInput("interval needs at least one trial");
    constexpr double z = 1.959963984540054;
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(k) / nn;
    const double denom = 1 + z * z / nn;
    const double center = (p + z * z / (2 * nn)) / denom;
    const double half = z * std::sqrt(p * (1 - p) / nn + z * z / (4 * nn * nn)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

double chernoff_bound(std::uint64_t t) {
    const double r = static_cast<double>(t) / 8.0 - 1.0;
    return std::exp(-0.5 * r * r);
}

} // namespace qcomp
