#pragma once

#include <cstdint>
#include <vector>

#include "qcomp/problems.hpp"
#include "qcomp/trees.hpp"

namespace qcomp {

/// All single-block deterministic trees over m bits of depth ≤ max_depth
/// that never re-read a bit, leaves labelled "0"/"1". Their number obeys
/// T(0,k) = 2, T(d,k) = 2 + k·T(d−1,k−1)².
class TreeFamily {
public:
    static constexpr std::uint64_t kDefaultCap = 1'000'000;

    TreeFamily(std::size_t m, std::size_t max_depth, std::uint64_t cap = kDefaultCap);

    static std::uint64_t count(std::size_t m, std::size_t max_depth);

    std::size_t m() const { return m_; }
    std::size_t max_depth() const { return max_depth_; }
    std::size_t size() const { return output_.size(); }
    /// Rebuilt on demand; the family itself stores only behaviour tables.
    XTree tree(std::size_t k) const;
    /// Label and number of queries of tree k on input index y.
    std::uint8_t output(std::size_t k, std::uint64_t y) const { return output_[k][y]; }
    std::uint8_t queries(std::size_t k, std::uint64_t y) const { return queries_[k][y]; }

private:
    struct Shape {
        int var; // -1 for a leaf
        int label;
        std::uint32_t child0, child1;
    };

    std::size_t m_;
    std::size_t max_depth_;
    std::vector<Shape> shapes_;          // shared DAG of subtrees
    std::vector<std::uint32_t> roots_;   // one entry per tree
    std::vector<std::vector<std::uint8_t>> output_;
    std::vector<std::vector<std::uint8_t>> queries_;
};

struct TreeProfile {
    std::size_t tree = 0;
    Rational delta; // accuracy − 1/2
    Rational d;     // expected queries
};

TreeProfile tree_profile(const TreeFamily& family, std::size_t k, const PromiseFunction& g, const Distribution& mu);

struct HardnessCertificate {
    Distribution mu;
    std::size_t m = 0;
    std::size_t max_depth = 0;
    std::size_t family_size = 0;
    Rational score;       // min over δ > 0 of d/δ²
    TreeProfile best;     // first tree attaining the minimum
};

/// Exact family-relative score of a balanced, legally supported μ. Uses
/// integer weights over a common denominator when it is small enough.
/// Parallel over trees. Throws InvalidInput if no tree has δ > 0.
HardnessCertificate hardness_score(const Distribution& mu, const PromiseFunction& g, const TreeFamily& family);

namespace reference {
/// Serial, Rational arithmetic throughout.
HardnessCertificate hardness_score(const Distribution& mu, const PromiseFunction& g, const TreeFamily& family);
} // namespace reference

struct SearchOptions {
    std::uint64_t iterations = 2000; // grid points examined; exhaustive when the grid is not larger
    unsigned grid = 16;              // each side's mass moves in steps of 1/grid
    std::uint64_t seed = 0;
    std::size_t max_depth = 0;       // 0 means m
};

struct SearchResult {
    HardnessCertificate best;
    HardnessCertificate start; // balanced mixture of the uniform law on legal inputs
    std::uint64_t grid_points = 0;
    std::uint64_t evaluated = 0;
    bool exhaustive = false;
};

/// Grid search then hill-climbing over balanced μ = (μ⁰ + μ¹)/2, each μ^a
/// having weights in multiples of 1/grid on g⁻¹(a). Ties go to the
/// lexicographically smaller μ. Never returns a score below the start.
SearchResult search_hardest(const PromiseFunction& g, const SearchOptions& options);

} // namespace qcomp
