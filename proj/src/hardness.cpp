#include "qcomp/hardness.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <random>

#include "qcomp/error.hpp"

namespace qcomp {

std::uint64_t TreeFamily::count(std::size_t m, std::size_t max_depth) {
    constexpr std::uint64_t sat = std::numeric_limits<std::uint64_t>::max();
    std::function<std::uint64_t(std::size_t, std::size_t)> t = [&](std::size_t d, std::size_t k) -> std::uint64_t {
        if (d == 0 || k == 0)
            return 2;
        const unsigned __int128 sub = t(d - 1, k - 1);
        const unsigned __int128 total = 2 + static_cast<unsigned __int128>(k) * sub * sub;
        return total > sat ? sat : static_cast<std::uint64_t>(total);
    };
    return t(max_depth, m);
}

TreeFamily::TreeFamily(std::size_t m, std::size_t max_depth, std::uint64_t cap) : m_(m), max_depth_(max_depth) {
    if (m == 0 || m > 4)
        throw InvalidInput("tree enumeration supports 1 <= m <= 4");
    if (max_depth > m)
        throw InvalidInput("max depth cannot exceed m without re-reading a bit");
    const std::uint64_t total = count(m, max_depth);
    if (total > cap)
        throw InvalidInput("family of " + std::to_string(total) + " trees exceeds the cap of " + std::to_string(cap));

    shapes_.push_back({-1, 0, 0, 0});
    shapes_.push_back({-1, 1, 0, 0});
    std::map<std::pair<std::size_t, unsigned>, std::vector<std::uint32_t>> memo;
    std::function<const std::vector<std::uint32_t>&(std::size_t, unsigned)> build =
        [&](std::size_t d, unsigned avail) -> const std::vector<std::uint32_t>& {
        const auto key = std::make_pair(d, avail);
        if (auto it = memo.find(key); it != memo.end())
            return it->second;
        std::vector<std::uint32_t> out{0, 1};
        if (d > 0)
            for (std::size_t var = 0; var < m; ++var) {
                if (!(avail & (1u << var)))
                    continue;
                const auto sub = build(d - 1, avail & ~(1u << var));
                for (std::uint32_t a : sub)
                    for (std::uint32_t b : sub) {
                        out.push_back(static_cast<std::uint32_t>(shapes_.size()));
                        shapes_.push_back({static_cast<int>(var), 0, a, b});
                    }
            }
        return memo.emplace(key, std::move(out)).first->second;
    };
    roots_ = build(max_depth, (1u << m) - 1);

    const std::uint64_t inputs = std::uint64_t{1} << m;
    output_.assign(roots_.size(), std::vector<std::uint8_t>(inputs));
    queries_.assign(roots_.size(), std::vector<std::uint8_t>(inputs));
    for (std::size_t k = 0; k < roots_.size(); ++k)
        for (std::uint64_t y = 0; y < inputs; ++y) {
            std::uint32_t s = roots_[k];
            std::uint8_t q = 0;
            while (shapes_[s].var >= 0) {
                // Bit j (1-based) of y sits at position m − j from the right.
                const bool bit = (y >> (m - 1 - static_cast<std::size_t>(shapes_[s].var))) & 1u;
                s = bit ? shapes_[s].child1 : shapes_[s].child0;
                ++q;
            }
            output_[k][y] = static_cast<std::uint8_t>(shapes_[s].label);
            queries_[k][y] = q;
        }
}

XTree TreeFamily::tree(std::size_t k) const {
    std::vector<XNode> nodes;
    std::function<NodeId(std::uint32_t)> copy = [&](std::uint32_t s) -> NodeId {
        const NodeId id = nodes.size();
        if (shapes_[s].var < 0) {
            nodes.push_back(XLeaf{shapes_[s].label ? "1" : "0"});
            return id;
        }
        nodes.push_back(XLeaf{});
        const NodeId c0 = copy(shapes_[s].child0);
        const NodeId c1 = copy(shapes_[s].child1);
        nodes[id] = XQuery{1, static_cast<std::size_t>(shapes_[s].var) + 1, c0, c1};
        return id;
    };
    const NodeId root = copy(roots_.at(k));
    return XTree(1, m_, std::move(nodes), root);
}

TreeProfile tree_profile(const TreeFamily& family, std::size_t k, const PromiseFunction& g, const Distribution& mu) {
    TreeProfile p;
    p.tree = k;
    Rational acc(0);
    for (const auto& [y, w] : mu.entries()) {
        const std::uint64_t idx = y.index();
        const GValue v = g.at_index(idx);
        if (v != GValue::star && family.output(k, idx) == (v == GValue::one ? 1 : 0))
            acc += w;
        p.d += w * Rational(family.queries(k, idx));
    }
    p.delta = acc - Rational(1, 2);
    return p;
}

namespace {

void require_scorable(const Distribution& mu, const PromiseFunction& g, const TreeFamily& family) {
    if (family.m() != g.m())
        throw InvalidInput("tree family and g disagree on m");
    require_nontrivial(mu, g);
    if (!is_balanced(mu, g))
        throw InvalidInput("distribution is not balanced for g");
}

HardnessCertificate certificate(const Distribution& mu, const TreeFamily& family, TreeProfile best) {
    HardnessCertificate c{mu, family.m(), family.max_depth(), family.size(), Rational(0), std::move(best)};
    c.score = c.best.d / (c.best.delta * c.best.delta);
    return c;
}

// d/δ² with weights w_y / L: 4·D·L / (2A − L)².
struct IntScore {
    unsigned __int128 num = 0;
    unsigned __int128 den = 0; // 0 marks "no positive advantage yet"
    std::size_t tree = 0;

    bool better_than(const IntScore& o) const {
        if (den == 0)
            return false;
        if (o.den == 0)
            return true;
        const unsigned __int128 a = num * o.den, b = o.num * den;
        return a < b || (a == b && tree < o.tree);
    }
};

constexpr std::int64_t kMaxCommonDenominator = std::int64_t{1} << 30;

IntScore score_integer(const TreeFamily& family, const std::vector<std::int64_t>& w, const std::vector<int>& gv,
                       std::int64_t total, std::size_t first, std::size_t last) {
    IntScore best;
    const std::uint64_t inputs = w.size();
    for (std::size_t k = first; k < last; ++k) {
        std::int64_t a = 0, d = 0;
        for (std::uint64_t y = 0; y < inputs; ++y) {
            if (w[y] == 0)
                continue;
            if (family.output(k, y) == gv[y])
                a += w[y];
            d += w[y] * family.queries(k, y);
        }
        const std::int64_t gap = 2 * a - total;
        if (gap <= 0)
            continue;
        IntScore s{static_cast<unsigned __int128>(4 * d) * static_cast<unsigned __int128>(total),
                   static_cast<unsigned __int128>(gap) * static_cast<unsigned __int128>(gap), k};
        if (s.better_than(best))
            best = s;
    }
    return best;
}

/// Integer weights over the least common denominator, if it is small.
bool integer_weights(const Distribution& mu, std::size_t m, std::vector<std::int64_t>& w, std::int64_t& total) {
    mpz_class l = 1;
    for (const auto& e : mu.entries())
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), e.weight.raw().get_den_mpz_t());
    if (l > kMaxCommonDenominator)
        return false;
    total = l.get_si();
    w.assign(std::size_t{1} << m, 0);
    for (const auto& e : mu.entries()) {
        const mpq_class scaled = e.weight.raw() * l;
        w[e.bits.index()] = mpz_class(scaled.get_num()).get_si();
    }
    return true;
}

std::vector<int> g_values(const PromiseFunction& g) {
    std::vector<int> gv(g.table().size());
    for (std::size_t y = 0; y < gv.size(); ++y)
        gv[y] = g.at_index(y) == GValue::star ? -1 : (g.at_index(y) == GValue::one ? 1 : 0);
    return gv;
}

HardnessCertificate score_generic_serial(const Distribution& mu, const PromiseFunction& g, const TreeFamily& family) {
    std::optional<TreeProfile> best;
    Rational best_score;
    for (std::size_t k = 0; k < family.size(); ++k) {
        TreeProfile p = tree_profile(family, k, g, mu);
        if (p.delta.sign() <= 0)
            continue;
        const Rational s = p.d / (p.delta * p.delta);
        if (!best || s < best_score) {
            best_score = s;
            best = std::move(p);
        }
    }
    if (!best)
        throw InvalidInput("no tree in the family has positive advantage");
    return certificate(mu, family, std::move(*best));
}

/// Serial fast path, falling back to Rationals for large denominators.
HardnessCertificate score_serial(const Distribution& mu, const PromiseFunction& g, const TreeFamily& family,
                                 const std::vector<int>& gv) {
    std::vector<std::int64_t> w;
    std::int64_t total = 0;
    if (!integer_weights(mu, g.m(), w, total))
        return score_generic_serial(mu, g, family);
    const IntScore best = score_integer(family, w, gv, total, 0, family.size());
    if (best.den == 0)
        throw InvalidInput("no tree in the family has positive advantage");
    return certificate(mu, family, tree_profile(family, best.tree, g, mu));
}

} // namespace

HardnessCertificate hardness_score(const Distribution& mu, const PromiseFunction& g, const TreeFamily& family) {
    require_scorable(mu, g, family);
    std::vector<std::int64_t> w;
    std::int64_t total = 0;
    if (!integer_weights(mu, g.m(), w, total))
        return score_generic_serial(mu, g, family);
    const std::vector<int> gv = g_values(g);

    IntScore best;
    const std::size_t size = family.size();
#pragma omp parallel
    {
        IntScore local;
        constexpr std::size_t chunk = 256;
        const auto chunks = static_cast<std::ptrdiff_t>((size + chunk - 1) / chunk);
#pragma omp for schedule(static) nowait
        for (std::ptrdiff_t c = 0; c < chunks; ++c) {
            const std::size_t first = static_cast<std::size_t>(c) * chunk;
            const IntScore s = score_integer(family, w, gv, total, first, std::min(size, first + chunk));
            if (s.better_than(local))
                local = s;
        }
#pragma omp critical(qcomp_hardness_merge)
        if (local.better_than(best))
            best = local;
    }
    if (best.den == 0)
        throw InvalidInput("no tree in the family has positive advantage");
    return certificate(mu, family, tree_profile(family, best.tree, g, mu));
}

namespace reference {

HardnessCertificate hardness_score(const Distribution& mu, const PromiseFunction& g, const TreeFamily& family) {
    require_scorable(mu, g, family);
    return score_generic_serial(mu, g, family);
}

} // namespace reference

// ---------------------------------------------------------------------------

namespace {

struct Candidate {
    std::vector<unsigned> counts; // over g⁻¹(0) then g⁻¹(1), each side summing to grid
};

Distribution candidate_distribution(const Candidate& c, const std::vector<Bitstring>& legal, unsigned grid) {
    std::vector<Distribution::Entry> entries;
    for (std::size_t k = 0; k < legal.size(); ++k)
        if (c.counts[k] > 0)
            entries.push_back({legal[k], Rational(c.counts[k], 2 * static_cast<std::int64_t>(grid))});
    return Distribution(std::move(entries));
}

/// Lexicographic comparison of two distributions by their weight on each
/// legal input, in input order.
bool lexicographically_less(const Distribution& a, const Distribution& b, const std::vector<Bitstring>& legal) {
    for (const auto& y : legal) {
        const Rational pa = a.probability(y), pb = b.probability(y);
        if (pa != pb)
            return pa < pb;
    }
    return false;
}

bool harder(const HardnessCertificate& a, const HardnessCertificate& b, const std::vector<Bitstring>& legal) {
    if (a.score != b.score)
        return a.score > b.score;
    return lexicographically_less(a.mu, b.mu, legal);
}

void compositions(unsigned total, std::size_t parts, std::vector<unsigned>& current,
                  std::vector<std::vector<unsigned>>& out) {
    if (parts == 1) {
        current.push_back(total);
        out.push_back(current);
        current.pop_back();
        return;
    }
    for (unsigned k = 0; k <= total; ++k) {
        current.push_back(k);
        compositions(total - k, parts - 1, current, out);
        current.pop_back();
    }
}

mpz_class composition_count(unsigned total, std::size_t parts) {
    mpz_class c;
    mpz_bin_uiui(c.get_mpz_t(), total + parts - 1, parts - 1);
    return c;
}

/// Uniform random composition of total into parts (stars and bars).
std::vector<unsigned> random_composition(std::mt19937_64& rng, unsigned total, std::size_t parts) {
    const std::size_t slots = total + parts - 1;
    std::vector<std::size_t> bars;
    for (std::size_t s = 0; s < slots && bars.size() < parts - 1; ++s) {
        const std::size_t need = parts - 1 - bars.size();
        if (rng() % (slots - s) < need)
            bars.push_back(s);
    }
    std::vector<unsigned> out;
    std::size_t prev = 0;
    for (std::size_t b : bars) {
        out.push_back(static_cast<unsigned>(b - prev));
        prev = b + 1;
    }
    out.push_back(static_cast<unsigned>(slots - prev));
    return out;
}

} // namespace

SearchResult search_hardest(const PromiseFunction& g, const SearchOptions& options) {
    if (options.grid == 0 || options.grid > 64)
        throw InvalidInput("grid resolution must be in [1, 64]");
    const std::size_t m = g.m();
    const TreeFamily family(m, options.max_depth == 0 ? m : options.max_depth);
    const std::vector<int> gv = g_values(g);
    const auto zeros = g.preimage(false), ones = g.preimage(true);
    if (zeros.empty() || ones.empty())
        throw InvalidInput("g must take both values");
    std::vector<Bitstring> legal = zeros;
    legal.insert(legal.end(), ones.begin(), ones.end());
    std::vector<Bitstring> legal_sorted = legal;
    std::sort(legal_sorted.begin(), legal_sorted.end());

    std::vector<Distribution::Entry> uniform;
    for (const auto& y : legal)
        uniform.push_back({y, Rational(1)});
    const Distribution start = balanced_mixture(Distribution::normalized(uniform), g);
    const HardnessCertificate start_score = hardness_score(start, g, family);
    std::uint64_t evaluated = 0;

    const unsigned grid = options.grid;
    const mpz_class count = composition_count(grid, zeros.size()) * composition_count(grid, ones.size());
    const std::uint64_t grid_points =
        count.fits_ulong_p() ? count.get_ui() : std::numeric_limits<std::uint64_t>::max();
    const bool exhaustive = count <= mpz_class(std::to_string(options.iterations));

    std::vector<Candidate> candidates;
    if (exhaustive) {
        std::vector<std::vector<unsigned>> left, right;
        std::vector<unsigned> scratch;
        compositions(grid, zeros.size(), scratch, left);
        compositions(grid, ones.size(), scratch, right);
        for (const auto& a : left)
            for (const auto& b : right) {
                Candidate c{a};
                c.counts.insert(c.counts.end(), b.begin(), b.end());
                candidates.push_back(std::move(c));
            }
    } else {
        std::mt19937_64 rng(options.seed);
        for (std::uint64_t k = 0; k < options.iterations; ++k) {
            Candidate c{random_composition(rng, grid, zeros.size())};
            const auto b = random_composition(rng, grid, ones.size());
            c.counts.insert(c.counts.end(), b.begin(), b.end());
            candidates.push_back(std::move(c));
        }
    }

    auto evaluate = [&](const std::vector<Candidate>& batch) {
        std::vector<std::optional<HardnessCertificate>> scores(batch.size());
        const auto total = static_cast<std::ptrdiff_t>(batch.size());
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t k = 0; k < total; ++k) {
            const auto idx = static_cast<std::size_t>(k);
            const Distribution mu = candidate_distribution(batch[idx], legal, grid);
            try {
                scores[idx] = score_serial(mu, g, family, gv);
            } catch (const InvalidInput&) {
                // No positive-advantage tree under this μ; not a candidate.
            }
        }
        evaluated += batch.size();
        return scores;
    };

    std::optional<std::size_t> best_idx;
    std::optional<HardnessCertificate> best;
    {
        auto scores = evaluate(candidates);
        for (std::size_t k = 0; k < scores.size(); ++k)
            if (scores[k] && (!best || harder(*scores[k], *best, legal_sorted))) {
                best = std::move(scores[k]);
                best_idx = k;
            }
    }

    if (best) {
        Candidate current = candidates[*best_idx];
        for (std::uint64_t step = 0; step < options.iterations; ++step) {
            std::vector<Candidate> moves;
            auto side_moves = [&](std::size_t begin, std::size_t end) {
                for (std::size_t from = begin; from < end; ++from) {
                    if (current.counts[from] == 0)
                        continue;
                    for (std::size_t to = begin; to < end; ++to) {
                        if (to == from)
                            continue;
                        Candidate c = current;
                        --c.counts[from];
                        ++c.counts[to];
                        moves.push_back(std::move(c));
                    }
                }
            };
            side_moves(0, zeros.size());
            side_moves(zeros.size(), legal.size());
            if (moves.empty())
                break;
            auto scores = evaluate(moves);
            std::optional<std::size_t> pick;
            for (std::size_t k = 0; k < scores.size(); ++k)
                if (scores[k] && (!pick || harder(*scores[k], *scores[*pick], legal_sorted)))
                    pick = k;
            if (!pick || scores[*pick]->score <= best->score)
                break;
            best = std::move(scores[*pick]);
            current = moves[*pick];
        }
    }

    HardnessCertificate winner = (best && !harder(start_score, *best, legal_sorted)) ? *best : start_score;
    return SearchResult{std::move(winner), start_score, grid_points, evaluated, exhaustive};
}

} // namespace qcomp
