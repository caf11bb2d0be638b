#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qcomp/problems.hpp"

namespace qcomp {

// Threshold problems on n-bit blocks: g₀(x) = 0 if |x| ≤ n/2 − √n, 1 if
// |x| ≥ n/2 + √n, * otherwise; f₀(z) = {a : |a ⊕ z| ≤ n/2 − √n}. All
// comparisons with √n are made on squared integers.

bool at_most_low_threshold(std::uint64_t n, std::uint64_t w);  // w ≤ n/2 − √n
bool at_least_high_threshold(std::uint64_t n, std::uint64_t w); // w ≥ n/2 + √n

GValue g0_from_weight(std::uint64_t n, std::uint64_t w);
GValue g0_eval(const Bitstring& x);
bool f0_contains(const Bitstring& z, const Bitstring& a);

/// Exact integer square root when n is a perfect square.
std::optional<std::uint64_t> exact_sqrt(std::uint64_t n);

/// P[majority of t probes is correct] with each probe correct with
/// probability 1/2 + 1/√n. Requires n a perfect square ≥ 4, t odd, t ≤ √n.
Rational exact_probe_advantage(std::uint64_t n, std::uint64_t t);
/// 1/2 + t/(8√n).
Rational advantage_bound(std::uint64_t n, std::uint64_t t);

// ---------------------------------------------------------------------------
// The majority-of-probes protocol.

/// Deterministic 64-bit stream keyed by (seed, trial, block); draw k is a
/// pure function of the key and k, so results do not depend on scheduling.
class ProbeStream {
public:
    ProbeStream(std::uint64_t seed, std::uint64_t trial, std::uint64_t block);
    std::uint64_t next();
    /// Uniform on [0, n) by rejection.
    std::uint64_t uniform(std::uint64_t n);

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

struct ProtocolRun {
    Bitstring answer;
    std::uint64_t queries = 0;
};

/// Runs the protocol on n concrete blocks of n bits each.
ProtocolRun run_probe_protocol(const std::vector<Bitstring>& blocks, std::uint64_t t, std::uint64_t seed,
                               std::uint64_t trial);

enum class InputFamily { boundary_zero, boundary_one, mixed_boundary, all_zero, all_one };

const char* to_string(InputFamily f);
InputFamily input_family_from_string(const std::string& s);

/// Block i of the family as (g₀ value, Hamming weight); its ones occupy the
/// first positions. Boundary blocks sit at the extreme legal weights.
std::pair<bool, std::uint64_t> family_block(std::uint64_t n, InputFamily family, std::uint64_t i);

struct MonteCarloResult {
    std::uint64_t n = 0, t = 0, trials = 0, seed = 0;
    InputFamily family = InputFamily::mixed_boundary;
    std::uint64_t errors = 0;
    double estimate = 0, ci_low = 0, ci_high = 0;
    double chernoff_bound = 0; // exp(−(t/8 − 1)²/2)
    std::uint64_t queries_per_run = 0;
};

/// Runs `trials` independent executions on the family's input; an execution
/// errs when its output is not in f₀(z). Parallel over trials.
MonteCarloResult monte_carlo_error(std::uint64_t n, std::uint64_t t, std::uint64_t trials, std::uint64_t seed,
                                   InputFamily family);

namespace reference {
MonteCarloResult monte_carlo_error(std::uint64_t n, std::uint64_t t, std::uint64_t trials, std::uint64_t seed,
                                   InputFamily family);
} // namespace reference

/// 95% Wilson score interval for k successes out of n.
std::pair<double, double> wilson_interval(std::uint64_t k, std::uint64_t n);

double chernoff_bound(std::uint64_t t);

} // namespace qcomp
