#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "qcomp/instance.hpp"

namespace qcomp {

using Rng = std::mt19937_64;

/// Partial function taking both values 0 and 1 somewhere.
PromiseFunction random_promise_function(Rng& rng, std::size_t m);

/// Random integer weights 1..max_weight on a random subset of the legal
/// inputs that contains both preimages.
Distribution random_block_distribution(Rng& rng, const PromiseFunction& g, unsigned max_weight = 9);

/// Full support over {0,1}^len with weights 1..max_weight.
Distribution random_full_support(Rng& rng, std::size_t len, unsigned max_weight = 9);

/// Random nonempty support over {0,1}^len.
Distribution random_distribution(Rng& rng, std::size_t len, unsigned max_weight = 9);

/// Each z accepts a random nonempty subset of the answers.
Relation random_relation(Rng& rng, std::size_t n, const std::vector<std::string>& answers);

/// Random X-query tree of depth at most max_depth; leaves carry answers.
XTree random_xtree(Rng& rng, std::size_t n, std::size_t m, std::size_t max_depth,
                   const std::vector<std::string>& answers);

Instance random_instance(Rng& rng, std::size_t n, std::size_t m, std::size_t max_depth);

} // namespace qcomp
