#include "qcomp/verify.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "qcomp/error.hpp"

namespace qcomp {

bool VerificationReport::pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

void VerificationReport::add(std::string name, bool pass, std::string witness, std::optional<NodeId> vertex) {
    if (pass)
        checks.push_back({std::move(name), true, {}, std::nullopt});
    else
        checks.push_back({std::move(name), false, std::move(witness), vertex});
}

void VerificationReport::append(const VerificationReport& other) {
    checks.insert(checks.end(), other.checks.begin(), other.checks.end());
}

namespace {

std::string tagged(const std::string& name, const std::string& label) { return name + "[" + label + "]"; }

std::string mismatch(const std::string& where, const Rational& lhs, const Rational& rhs) {
    return where + ": P gives " + lhs.str() + ", P' gives " + rhs.str();
}

/// Mass of reaching each vertex of P, and of reaching it with Z_i = 1, under X ~ mu.
struct XMasses {
    std::vector<Rational> reach;
    std::vector<std::vector<Rational>> z1; // [v][i-1]
};

XMasses x_masses(const XTree& p, const PromiseFunction& g, const Distribution& mu) {
    XMasses out;
    out.reach.assign(p.size(), Rational(0));
    out.z1.assign(p.size(), std::vector<Rational>(p.n(), Rational(0)));
    std::vector<NodeId> visited;
    for (const auto& [x, w] : mu.entries()) {
        const auto z = apply_blocks(g, x);
        if (!z)
            continue;
        visited.clear();
        p.walk(x, &visited);
        for (NodeId v : visited) {
            out.reach[v] += w;
            for (std::size_t i = 1; i <= p.n(); ++i)
                if (z->at(i))
                    out.z1[v][i - 1] += w;
        }
    }
    return out;
}

/// Same quantities for P′ with Z uniform.
XMasses z_masses(const PolarisedTree& tp) {
    XMasses out;
    const std::size_t n = tp.n();
    out.reach.assign(tp.size(), Rational(0));
    out.z1.assign(tp.size(), std::vector<Rational>(n, Rational(0)));
    const auto laws = z_laws(tp);
    const Rational w = Rational(1) / pow(Rational(2), static_cast<unsigned>(n));
    for (std::size_t k = 0; k < laws.size(); ++k) {
        const Bitstring z = Bitstring::from_index(k, n);
        for (NodeId u = 0; u < tp.size(); ++u) {
            const Rational r = laws[k].reach(u) * w;
            if (r.is_zero())
                continue;
            out.reach[u] += r;
            for (std::size_t i = 1; i <= n; ++i)
                if (z.at(i))
                    out.z1[u][i - 1] += r;
        }
    }
    return out;
}

} // namespace

std::vector<int> answer_orientation(const XTree& p, const PromiseFunction& g, const Distribution& mu_g) {
    const XMasses xm = x_masses(p, g, lift_distribution(Distribution::uniform(p.n()), mu_g, g));
    std::vector<int> a0(p.size(), 0);
    for (NodeId v = 0; v < p.size(); ++v) {
        const auto* q = std::get_if<XQuery>(&p.node(v));
        if (!q || xm.reach[v].is_zero())
            continue;
        const Rational p_in = xm.z1[v][q->block - 1] / xm.reach[v];
        auto edge_p = [&](NodeId c) {
            return xm.reach[c].is_zero() ? p_in : xm.z1[c][q->block - 1] / xm.reach[c];
        };
        a0[v] = edge_p(q->child0) <= edge_p(q->child1) ? 0 : 1;
    }
    return a0;
}

CheckResult check_isomorphism(const XTree& p, const PolarisedTree& tp, const IsomorphismMap& iso,
                              const std::vector<int>& a0) {
    CheckResult r{"isomorphism", true, {}, std::nullopt};
    auto fail = [&](std::string why) {
        r.pass = false;
        r.witness = std::move(why);
        return r;
    };
    if (iso.x_to_z.size() != p.size() || tp.size() != p.size())
        return fail("node counts differ: P has " + std::to_string(p.size()) + ", P' has " + std::to_string(tp.size()));
    std::set<NodeId> image;
    for (NodeId u : iso.x_to_z) {
        if (u >= tp.size())
            return fail("image node " + std::to_string(u) + " does not exist");
        image.insert(u);
    }
    if (image.size() != p.size())
        return fail("map is not injective");
    if (iso(p.root()) != tp.root())
        return fail("root is not mapped to the root");
    for (NodeId v = 0; v < p.size(); ++v) {
        const PNode& img = tp.node(iso(v));
        if (const auto* leaf = std::get_if<XLeaf>(&p.node(v))) {
            const auto* zl = std::get_if<ZLeaf>(&img);
            if (!zl || zl->answer != leaf->answer)
                return fail("leaf " + std::to_string(v) + " is not mapped to a leaf labelled \"" + leaf->answer + "\"");
            continue;
        }
        const auto& q = std::get<XQuery>(p.node(v));
        if (!std::holds_alternative<ZNode>(img) && !std::holds_alternative<ZMixer>(img))
            return fail("X-query vertex " + std::to_string(v) + " is not mapped to a Z-node or Z-mixer");
        const NodeId lt = a0.at(v) == 0 ? q.child0 : q.child1;
        const NodeId gt = a0.at(v) == 0 ? q.child1 : q.child0;
        const auto kids = children_of(img);
        if (kids[0] != iso(lt) || kids[1] != iso(gt))
            return fail("edges of vertex " + std::to_string(v) + " are not preserved");
    }
    return r;
}

VerificationReport verify_simulation(const XTree& p, const Relation& f, const PromiseFunction& g, const Distribution& mu_g,
                                    const PolarisedTree& tp, const IsomorphismMap& iso, const NamedDistribution& nu) {
    const auto& [label, dist] = nu;
    VerificationReport out;
    const Distribution lifted = lift_distribution(dist, mu_g, g);
    const ProtocolReport rx = evaluate_x_protocol(p, f, g, lifted);
    const ProtocolReport rz = evaluate_polarised(tp, f, dist);

    out.add(tagged("error_equality", label), rx.error == rz.error, mismatch("error", rx.error, rz.error));

    std::string leaf_witness;
    for (const auto& [z0, w] : dist.entries()) {
        const auto x_leaf = x_reach(p, lift_distribution(z0, mu_g, g));
        const ZLaw law = z_law(tp, z0);
        for (NodeId v = 0; v < p.size() && leaf_witness.empty(); ++v) {
            if (!p.is_leaf(v))
                continue;
            const Rational pz = law.reach(iso(v));
            if (x_leaf[v] != pz)
                leaf_witness = mismatch("z=" + z0.str() + " leaf " + std::to_string(v), x_leaf[v], pz);
        }
        if (!leaf_witness.empty())
            break;
    }
    out.add(tagged("leaf_law_equality", label), leaf_witness.empty(), leaf_witness);

    std::string reach_witness, law_witness;
    for (NodeId v = 0; v < p.size(); ++v) {
        const NodeId u = iso(v);
        if (reach_witness.empty() && rx.reach[v] != rz.reach[u])
            reach_witness = mismatch("vertex " + std::to_string(v), rx.reach[v], rz.reach[u]);
        if (law_witness.empty() && rx.z_mass[v] != rz.z_mass[u]) {
            // Report the first z where the joint masses differ.
            std::set<Bitstring> zs;
            for (const auto& [z, m] : rx.z_mass[v])
                zs.insert(z);
            for (const auto& [z, m] : rz.z_mass[u])
                zs.insert(z);
            for (const auto& z : zs) {
                auto lookup = [&](const std::map<Bitstring, Rational>& mp) {
                    const auto it = mp.find(z);
                    return it == mp.end() ? Rational(0) : it->second;
                };
                const Rational a = lookup(rx.z_mass[v]), b = lookup(rz.z_mass[u]);
                if (a != b) {
                    law_witness = mismatch("vertex " + std::to_string(v) + " P[reach, Z=" + z.str() + "]", a, b);
                    break;
                }
            }
        }
    }
    out.add(tagged("reach_equality", label), reach_witness.empty(), reach_witness);
    out.add(tagged("conditional_z_law_equality", label), law_witness.empty(), law_witness);
    return out;
}

CheckResult check_at_most_once(const PolarisedTree& tp) {
    CheckResult r{"at_most_once_queries", true, {}, std::nullopt};
    const std::size_t n = tp.n();
    for (std::uint64_t k = 0; k < (std::uint64_t{1} << n) && r.pass; ++k) {
        const Bitstring z = Bitstring::from_index(k, n);
        Rational total(0);
        for (const auto& path : enumerate_paths(tp, z)) {
            total += path.weight;
            std::uint32_t known = 0;
            for (const auto& step : path.steps) {
                if (!step.queried)
                    continue;
                const auto* q = std::get_if<ZNode>(&tp.node(step.node));
                const std::uint32_t bit = q ? (1u << (q->index - 1)) : 0u;
                if (!q || (known & bit)) {
                    r.pass = false;
                    r.witness = "z=" + z.str() + ": repeated or misplaced query at vertex " + std::to_string(step.node);
                    break;
                }
                known |= bit;
            }
            if (!r.pass)
                break;
        }
        if (r.pass && total != Rational(1)) {
            r.pass = false;
            r.witness = "z=" + z.str() + ": path weights sum to " + total.str();
        }
    }
    return r;
}

VerificationReport verify_structure(const XTree& p, const PromiseFunction& g, const Distribution& mu_g,
                                    const PolarisedTree& tp, const NamedDistribution& mu_f) {
    VerificationReport out;
    const PolarityReport pol = check_polarity(tp);
    std::string pol_witness;
    if (pol.violation)
        pol_witness = "vertex " + std::to_string(pol.violation->vertex) + " reached knowing Z_" +
                      std::to_string(pol.violation->index) + " = 0 and = 1";
    out.add("polarity", pol.polarised(), pol_witness,
            pol.violation ? std::optional<NodeId>(pol.violation->vertex) : std::nullopt);

    const CheckResult once = check_at_most_once(tp);
    out.add(once.name, once.pass, once.witness);

    const auto laws = z_laws(tp);
    std::string loc_witness;
    for (NodeId l : tp.leaves()) {
        const LocalityReport lr = check_query_locality(tp, l, laws);
        if (!lr.pass) {
            loc_witness = "leaf " + std::to_string(l) + ", index " + std::to_string(lr.index) + ": z=" +
                          lr.z_first->str() + " vs z=" + lr.z_second->str();
            break;
        }
    }
    out.add("query_locality", loc_witness.empty(), loc_witness);

    const Distribution mu = lift_distribution(mu_f.second, mu_g, g);
    std::string ind_witness;
    for (NodeId v = 0; v < p.size() && ind_witness.empty(); ++v)
        for (std::size_t i = 1; i <= p.n(); ++i) {
            const IndependenceReport ir = check_block_independence(p, v, g, mu, i);
            if (!ir.pass) {
                ind_witness = "vertex " + std::to_string(v) + ", block " + std::to_string(i) + ", Z_i=" +
                              std::to_string(ir.value) + ": X_i=" + ir.block_value->str() + " rest=" +
                              ir.rest_value->str();
                break;
            }
        }
    out.add(tagged("block_independence", mu_f.first), ind_witness.empty(), ind_witness);
    return out;
}

VerificationReport verify_predictors(const XTree& p, const PromiseFunction& g, const Distribution& mu_g,
                                     const PolarisedTree& tp, const NamedDistribution& mu_f) {
    const auto& [label, dist] = mu_f;
    VerificationReport out;
    const XLeafStats xs = x_leaf_stats(p, g, mu_g, dist);
    const ZLeafStats zs = z_leaf_stats(tp, dist);
    const std::size_t n = p.n();

    std::vector<Rational> queried(n, Rational(0));
    for (const auto& [z, w] : dist.entries()) {
        const ZLaw law = z_law(tp, z);
        for (std::size_t i = 0; i < n; ++i)
            queried[i] += w * law.index_queries[i];
    }

    std::string tt, deio, bound;
    for (std::size_t i = 0; i < n; ++i) {
        const std::string idx = "index " + std::to_string(i + 1);
        if (tt.empty() && xs.tree_delta[i] != zs.tree_delta[i])
            tt = mismatch(idx + " delta", xs.tree_delta[i], zs.tree_delta[i]);
        if (deio.empty() && zs.tree_delta[i] != zs.half_mean_q[i])
            deio = idx + ": delta(T') = " + zs.tree_delta[i].str() + ", E[q]/2 = " + zs.half_mean_q[i].str();
        if (bound.empty() && queried[i] > Rational(4) * zs.tree_delta[i])
            bound = idx + ": P[queried] = " + queried[i].str() + " > 4*delta(T') = " +
                    (Rational(4) * zs.tree_delta[i]).str();
    }
    out.add(tagged("delta_equality", label), tt.empty(), tt);
    out.add(tagged("delta_half_mean_q", label), deio.empty(), deio);
    out.add(tagged("query_probability_bound", label), bound.empty(), bound);
    return out;
}

VerificationReport verify_translation(const XTree& p, const PromiseFunction& g, const Distribution& mu_g,
                                      const PolarisedTree& tp, const IsomorphismMap& iso) {
    VerificationReport out;
    const std::vector<int> a0 = answer_orientation(p, g, mu_g);
    const CheckResult shape = check_isomorphism(p, tp, iso, a0);
    out.add(shape.name, shape.pass, shape.witness);
    if (!shape.pass) {
        out.add("answer_edge_laws", false, "no isomorphism");
        out.add("answer_edge_probability", false, "no isomorphism");
        return out;
    }

    const XMasses xm = x_masses(p, g, lift_distribution(Distribution::uniform(p.n()), mu_g, g));
    const XMasses zm = z_masses(tp);
    std::string req, reqt;
    std::optional<NodeId> req_vertex, reqt_vertex;
    for (NodeId v : p.top_down()) {
        const auto* q = std::get_if<XQuery>(&p.node(v));
        if (!q || xm.reach[v].is_zero())
            continue;
        const std::size_t i = q->block - 1;
        const NodeId u = iso(v);
        const std::string where = "vertex " + std::to_string(v);
        if (zm.reach[u] != xm.reach[v]) {
            if (reqt.empty()) {
                reqt = mismatch(where + " reach", xm.reach[v], zm.reach[u]);
                reqt_vertex = v;
            }
            continue;
        }
        const NodeId lt = a0[v] == 0 ? q->child0 : q->child1;
        const Rational tau_x = xm.reach[lt] / xm.reach[v];
        const Rational tau_z = zm.reach[iso(lt)] / zm.reach[u];
        if (reqt.empty() && tau_x != tau_z) {
            reqt = mismatch(where + " P[answer 0]", tau_x, tau_z);
            reqt_vertex = v;
        }
        for (int b = 0; b < 2 && req.empty(); ++b) {
            const NodeId c = (b == 0) ? lt : (lt == q->child0 ? q->child1 : q->child0);
            if (xm.reach[c].is_zero())
                continue;
            const Rational px = xm.z1[c][i] / xm.reach[c];
            if (zm.reach[iso(c)].is_zero()) {
                req = where + " answer " + std::to_string(b) + ": image edge has probability 0";
                req_vertex = v;
                break;
            }
            const Rational pz = zm.z1[iso(c)][i] / zm.reach[iso(c)];
            if (px != pz) {
                req = mismatch(where + " P[Z_" + std::to_string(i + 1) + "=1 | answer " + std::to_string(b) + "]", px, pz);
                req_vertex = v;
            }
        }
    }
    out.add("answer_edge_laws", req.empty(), req, req_vertex);
    out.add("answer_edge_probability", reqt.empty(), reqt, reqt_vertex);
    return out;
}

} // namespace qcomp
