#include "qcomp/serialize.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "qcomp/error.hpp"

namespace qcomp {

namespace {

[[noreturn]] void schema_error(const std::string& where, const std::string& what) {
    throw ParseError(where + ": " + what);
}

const Json& field(const Json& j, const char* key, const std::string& where) {
    if (!j.is_object())
        schema_error(where, "expected an object");
    const auto it = j.find(key);
    if (it == j.end())
        schema_error(where, std::string("missing field '") + key + "'");
    return *it;
}

const Json* optional_field(const Json& j, const char* key) {
    if (!j.is_object())
        return nullptr;
    const auto it = j.find(key);
    return (it == j.end() || it->is_null()) ? nullptr : &*it;
}

std::size_t as_size(const Json& j, const std::string& where) {
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0))
        schema_error(where, "expected a non-negative integer");
    return j.get<std::size_t>();
}

std::string as_string(const Json& j, const std::string& where) {
    if (!j.is_string())
        schema_error(where, "expected a string");
    return j.get<std::string>();
}

const Json& as_array(const Json& j, const std::string& where) {
    if (!j.is_array())
        schema_error(where, "expected an array");
    return j;
}

std::string integer_text(const Json& j, const std::string& where) {
    if (j.is_string())
        return j.get<std::string>();
    if (j.is_number_integer())
        return std::to_string(j.get<std::int64_t>());
    schema_error(where, "expected a decimal integer string");
}

Rational rational_at(const Json& j, const std::string& where) {
    if (j.is_number_integer())
        return Rational(j.get<std::int64_t>());
    try {
        return Rational::parse(as_string(j, where));
    } catch (const ParseError& e) {
        schema_error(where, e.what());
    } catch (const InvalidInput& e) {
        schema_error(where, e.what());
    }
}

Json optional_rational(const std::optional<Rational>& r) { return r ? encode(*r) : Json(nullptr); }

std::optional<Rational> decode_optional_rational(const Json& j, const char* key, const std::string& where) {
    const Json* f = optional_field(j, key);
    if (!f)
        return std::nullopt;
    return rational_at(*f, where + "." + key);
}

template <typename F>
auto guarded(const char* what, F&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const ParseError&) {
        throw;
    } catch (const Json::exception& e) {
        throw ParseError(std::string(what) + ": " + e.what());
    } catch (const InvalidInput& e) {
        throw ParseError(std::string(what) + ": " + e.what());
    } catch (const ConsistencyError& e) {
        throw ParseError(std::string(what) + ": " + e.what());
    }
}

std::pair<NodeId, NodeId> children_at(const Json& node, const std::string& where) {
    const Json& c = as_array(field(node, "children", where), where + ".children");
    if (c.size() != 2)
        schema_error(where + ".children", "expected exactly two children");
    return {as_size(c[0], where + ".children[0]"), as_size(c[1], where + ".children[1]")};
}

/// Node records indexed by their "id" field, which must cover 0..N-1.
std::vector<const Json*> nodes_by_id(const Json& nodes, const std::string& where) {
    as_array(nodes, where);
    std::vector<const Json*> out(nodes.size(), nullptr);
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        const std::string here = where + "[" + std::to_string(k) + "]";
        const std::size_t id = as_size(field(nodes[k], "id", here), here + ".id");
        if (id >= out.size() || out[id])
            schema_error(here, "node ids must be distinct and in [0, " + std::to_string(out.size()) + ")");
        out[id] = &nodes[k];
    }
    return out;
}

Json encode_node_common(NodeId id, const char* kind) { return Json{{"id", id}, {"kind", kind}}; }

} // namespace

Json parse_json(std::string_view text) {
    try {
        return Json::parse(text.begin(), text.end());
    } catch (const Json::parse_error& e) {
        std::size_t line = 1, column = 1;
        const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        for (std::size_t k = 0; k < stop; ++k) {
            if (text[k] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw ParseError("malformed JSON", line, column);
    }
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ParseError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_json(buf.str());
    } catch (const ParseError& e) {
        throw ParseError(path + ": malformed JSON", e.line, e.column);
    }
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------

Json encode(const Rational& r) { return r.num_str() + "/" + r.den_str(); }

Json encode(const Distribution& d) {
    Json out = Json::array();
    for (const auto& [bits, w] : d.entries())
        out.push_back({{"bits", bits.str()}, {"num", w.num_str()}, {"den", w.den_str()}});
    return out;
}

Json encode(const PromiseFunction& g) {
    Json out = Json::array();
    for (GValue v : g.table())
        out.push_back(std::string(1, to_char(v)));
    return out;
}

Json encode(const Relation& f) {
    Json accepted = Json::object();
    for (std::uint64_t k = 0; k < (std::uint64_t{1} << f.n()); ++k) {
        const Bitstring z = Bitstring::from_index(k, f.n());
        Json set = Json::array();
        for (const auto& a : f.accepted(z))
            set.push_back(a);
        accepted[z.str()] = std::move(set);
    }
    return {{"n", f.n()}, {"answers", f.answers()}, {"accepted", std::move(accepted)}};
}

Json encode(const XTree& t) {
    Json nodes = Json::array();
    for (NodeId v = 0; v < t.size(); ++v) {
        if (const auto* leaf = std::get_if<XLeaf>(&t.node(v))) {
            Json n = encode_node_common(v, "leaf");
            n["answer"] = leaf->answer;
            nodes.push_back(std::move(n));
        } else {
            const auto& q = std::get<XQuery>(t.node(v));
            Json n = encode_node_common(v, "query");
            n["block"] = q.block - 1;
            n["bit"] = q.bit - 1;
            n["children"] = {q.child0, q.child1};
            nodes.push_back(std::move(n));
        }
    }
    return {{"n", t.n()}, {"m", t.m()}, {"root", t.root()}, {"nodes", std::move(nodes)}};
}

Json encode(const PolarisedTree& t) {
    Json nodes = Json::array();
    for (NodeId v = 0; v < t.size(); ++v) {
        const PNode& node = t.node(v);
        Json n;
        if (const auto* leaf = std::get_if<ZLeaf>(&node)) {
            n = encode_node_common(v, "leaf");
            n["answer"] = leaf->answer ? Json(*leaf->answer) : Json(nullptr);
        } else if (const auto* f = std::get_if<RandFork>(&node)) {
            n = encode_node_common(v, "fork");
            n["alpha"] = encode(f->alpha);
            n["children"] = {f->left, f->right};
        } else if (const auto* q = std::get_if<ZNode>(&node)) {
            n = encode_node_common(v, "znode");
            n["index"] = q->index - 1;
            n["alpha"] = encode(q->alpha);
            n["beta"] = encode(q->beta);
            n["children"] = {q->child0, q->child1};
        } else {
            const auto& mx = std::get<ZMixer>(node);
            n = encode_node_common(v, "zmixer");
            n["index"] = mx.index - 1;
            n["alpha"] = encode(mx.alpha);
            n["beta"] = encode(mx.beta);
            n["children"] = {mx.child0, mx.child1};
        }
        nodes.push_back(std::move(n));
    }
    return {{"n", t.n()}, {"root", t.root()}, {"nodes", std::move(nodes)}};
}

Json encode(const IsomorphismMap& m) { return m.x_to_z; }

Json encode(const NodeTranslation& t) {
    return {{"vertex", t.vertex},
            {"block", t.block == 0 ? Json(nullptr) : Json(t.block - 1)},
            {"case", to_string(t.kind)},
            {"flip", t.flip},
            {"a0", t.a0},
            {"p_in", encode(t.p_in)},
            {"p_lt", encode(t.p_lt)},
            {"p_gt", encode(t.p_gt)},
            {"tau_lt", encode(t.tau_lt)},
            {"tau_gt", encode(t.tau_gt)},
            {"q_in", encode(t.q_in)},
            {"p_star", optional_rational(t.p_star)},
            {"polarity", t.polarity},
            {"gamma1", optional_rational(t.gamma1)},
            {"alpha_prime", optional_rational(t.alpha_prime)},
            {"gamma2", optional_rational(t.gamma2)},
            {"gamma3", optional_rational(t.gamma3)},
            {"alpha0", encode(t.alpha0)},
            {"beta0", encode(t.beta0)}};
}

Json encode(const TransformResult& r) {
    Json ledger = Json::array();
    for (const auto& t : r.ledger)
        ledger.push_back(encode(t));
    return {{"tree", encode(r.tree)}, {"isomorphism", encode(r.isomorphism)}, {"ledger", std::move(ledger)}};
}

Json encode(const Instance& in) {
    Json out{{"m", in.g.m()}, {"g", encode(in.g)}, {"mu_g", encode(in.mu_g)}};
    if (in.f) {
        out["n"] = in.f->n();
        out["f"] = encode(*in.f);
    }
    if (in.protocol) {
        out["n"] = in.protocol->n();
        Json p = encode(*in.protocol);
        out["protocol"] = {{"root", p["root"]}, {"nodes", p["nodes"]}};
    }
    if (in.nu)
        out["nu"] = encode(*in.nu);
    if (in.mu_f)
        out["mu_f"] = encode(*in.mu_f);
    return out;
}

Json encode(const ProtocolReport& r) {
    Json block = Json::array(), reach = Json::array(), z_mass = Json::array();
    for (const auto& q : r.block_queries)
        block.push_back(encode(q));
    for (const auto& p : r.reach)
        reach.push_back(encode(p));
    for (const auto& row : r.z_mass) {
        Json m = Json::object();
        for (const auto& [z, w] : row)
            m[z.str()] = encode(w);
        z_mass.push_back(std::move(m));
    }
    return {{"error", encode(r.error)},
            {"expected_queries", encode(r.expected_queries)},
            {"block_queries", std::move(block)},
            {"reach", std::move(reach)},
            {"z_mass", std::move(z_mass)},
            {"warnings", r.warnings}};
}

Json encode(const VerificationReport& r) {
    Json checks = Json::array();
    for (const auto& c : r.checks) {
        Json item{{"name", c.name}, {"pass", c.pass}};
        if (!c.pass)
            item["witness"] = c.witness;
        if (c.vertex)
            item["vertex"] = *c.vertex;
        checks.push_back(std::move(item));
    }
    return {{"pass", r.pass()}, {"checks", std::move(checks)}};
}

Json encode(const HardnessCertificate& c, const TreeFamily* family) {
    Json best{{"tree_index", c.best.tree}, {"delta", encode(c.best.delta)}, {"d", encode(c.best.d)}};
    if (family)
        best["tree"] = encode(family->tree(c.best.tree));
    return {{"m", c.m},
            {"max_depth", c.max_depth},
            {"family_size", c.family_size},
            {"mu", encode(c.mu)},
            {"score", encode(c.score)},
            {"best", std::move(best)}};
}

Json encode(const SearchResult& r, const TreeFamily* family) {
    return {{"best", encode(r.best, family)},
            {"start", encode(r.start, family)},
            {"grid_points", r.grid_points},
            {"evaluated", r.evaluated},
            {"exhaustive", r.exhaustive}};
}

Json encode(const std::vector<ComputationalPath>& paths, std::size_t n) {
    Json out = Json::array();
    for (const auto& p : paths) {
        Json steps = Json::array();
        for (const auto& s : p.steps)
            steps.push_back({{"node", s.node}, {"branch", s.branch}, {"queried", s.queried}});
        out.push_back({{"steps", std::move(steps)},
                       {"leaf", p.leaf},
                       {"memory", p.memory.str(n)},
                       {"weight", encode(p.weight)}});
    }
    return out;
}

// ---------------------------------------------------------------------------

Rational decode_rational(const Json& j) {
    return guarded("rational", [&] { return rational_at(j, "rational"); });
}

Distribution decode_distribution(const Json& j) {
    return guarded("distribution", [&] {
        std::vector<Distribution::Entry> entries;
        const Json& arr = as_array(j, "distribution");
        for (std::size_t k = 0; k < arr.size(); ++k) {
            const std::string here = "distribution[" + std::to_string(k) + "]";
            const Bitstring bits(as_string(field(arr[k], "bits", here), here + ".bits"));
            const Rational w = Rational::from_parts(integer_text(field(arr[k], "num", here), here + ".num"),
                                                    integer_text(field(arr[k], "den", here), here + ".den"));
            entries.push_back({bits, w});
        }
        if (entries.empty())
            schema_error("distribution", "empty support");
        return Distribution(std::move(entries));
    });
}

PromiseFunction decode_promise_function(const Json& j) {
    return guarded("g", [&] {
        const Json& table = j.is_object() ? field(j, "table", "g") : j;
        as_array(table, "g");
        std::size_t m = 0;
        while ((std::size_t{1} << m) < table.size())
            ++m;
        if ((std::size_t{1} << m) != table.size() || m == 0)
            schema_error("g", "table length must be 2^m with m >= 1");
        if (j.is_object())
            if (const Json* mf = optional_field(j, "m"); mf && as_size(*mf, "g.m") != m)
                schema_error("g.m", "does not match the table length");
        std::vector<GValue> values;
        for (std::size_t k = 0; k < table.size(); ++k) {
            const std::string s = as_string(table[k], "g[" + std::to_string(k) + "]");
            if (s == "0")
                values.push_back(GValue::zero);
            else if (s == "1")
                values.push_back(GValue::one);
            else if (s == "*")
                values.push_back(GValue::star);
            else
                schema_error("g[" + std::to_string(k) + "]", "expected \"0\", \"1\" or \"*\"");
        }
        return PromiseFunction(m, std::move(values));
    });
}

Relation decode_relation(const Json& j) {
    return guarded("f", [&] {
        const Json& acc = field(j, "accepted", "f");
        if (!acc.is_object())
            schema_error("f.accepted", "expected an object keyed by bitstrings");
        std::optional<std::size_t> n;
        if (const Json* nf = optional_field(j, "n"))
            n = as_size(*nf, "f.n");
        else if (!acc.empty())
            n = acc.begin().key().size();
        if (!n || *n == 0)
            schema_error("f", "cannot determine n");
        std::vector<std::string> answers;
        for (const auto& a : as_array(field(j, "answers", "f"), "f.answers"))
            answers.push_back(as_string(a, "f.answers"));
        std::vector<std::set<std::string>> sets(std::size_t{1} << *n);
        for (const auto& [key, value] : acc.items()) {
            const Bitstring z(key);
            if (z.size() != *n)
                schema_error("f.accepted." + key, "key has the wrong length");
            for (const auto& a : as_array(value, "f.accepted." + key))
                sets[z.index()].insert(as_string(a, "f.accepted." + key));
        }
        return Relation(*n, std::move(answers), std::move(sets));
    });
}

XTree decode_xtree(const Json& j, std::optional<std::size_t> n, std::optional<std::size_t> m) {
    return guarded("protocol", [&] {
        if (const Json* nf = optional_field(j, "n"))
            n = as_size(*nf, "protocol.n");
        if (const Json* mf = optional_field(j, "m"))
            m = as_size(*mf, "protocol.m");
        if (!n || !m)
            schema_error("protocol", "n and m must be given");
        const auto by_id = nodes_by_id(field(j, "nodes", "protocol"), "protocol.nodes");
        std::vector<XNode> nodes;
        for (std::size_t id = 0; id < by_id.size(); ++id) {
            const Json& node = *by_id[id];
            const std::string here = "protocol.nodes[id=" + std::to_string(id) + "]";
            const std::string kind = as_string(field(node, "kind", here), here + ".kind");
            if (kind == "leaf") {
                nodes.push_back(XLeaf{as_string(field(node, "answer", here), here + ".answer")});
            } else if (kind == "query") {
                const auto [c0, c1] = children_at(node, here);
                nodes.push_back(XQuery{as_size(field(node, "block", here), here + ".block") + 1,
                                       as_size(field(node, "bit", here), here + ".bit") + 1, c0, c1});
            } else {
                schema_error(here + ".kind", "expected \"leaf\" or \"query\"");
            }
        }
        return XTree(*n, *m, std::move(nodes), as_size(field(j, "root", "protocol"), "protocol.root"));
    });
}

PolarisedTree decode_polarised_tree(const Json& j) {
    return guarded("tree", [&] {
        const std::size_t n = as_size(field(j, "n", "tree"), "tree.n");
        const auto by_id = nodes_by_id(field(j, "nodes", "tree"), "tree.nodes");
        std::vector<PNode> nodes;
        for (std::size_t id = 0; id < by_id.size(); ++id) {
            const Json& node = *by_id[id];
            const std::string here = "tree.nodes[id=" + std::to_string(id) + "]";
            const std::string kind = as_string(field(node, "kind", here), here + ".kind");
            if (kind == "leaf") {
                const Json* a = optional_field(node, "answer");
                nodes.push_back(ZLeaf{a ? std::optional<std::string>(as_string(*a, here + ".answer")) : std::nullopt});
            } else if (kind == "fork") {
                const auto [l, r] = children_at(node, here);
                nodes.push_back(RandFork{rational_at(field(node, "alpha", here), here + ".alpha"), l, r});
            } else if (kind == "znode" || kind == "zmixer") {
                const auto [c0, c1] = children_at(node, here);
                const std::size_t index = as_size(field(node, "index", here), here + ".index") + 1;
                const Rational alpha = rational_at(field(node, "alpha", here), here + ".alpha");
                const Rational beta = rational_at(field(node, "beta", here), here + ".beta");
                if (kind == "znode")
                    nodes.push_back(ZNode{index, alpha, beta, c0, c1});
                else
                    nodes.push_back(ZMixer{index, alpha, beta, c0, c1});
            } else {
                schema_error(here + ".kind", "expected leaf, fork, znode or zmixer");
            }
        }
        return PolarisedTree(n, std::move(nodes), as_size(field(j, "root", "tree"), "tree.root"));
    });
}

IsomorphismMap decode_isomorphism(const Json& j) {
    return guarded("isomorphism", [&] {
        IsomorphismMap m;
        for (const auto& v : as_array(j, "isomorphism"))
            m.x_to_z.push_back(as_size(v, "isomorphism"));
        return m;
    });
}

NodeTranslation decode_node_translation(const Json& j) {
    return guarded("ledger", [&] {
        const std::string w = "ledger entry";
        NodeTranslation t;
        t.vertex = as_size(field(j, "vertex", w), w + ".vertex");
        const Json* b = optional_field(j, "block");
        t.block = b ? as_size(*b, w + ".block") + 1 : 0;
        const std::string kind = as_string(field(j, "case", w), w + ".case");
        bool found = false;
        for (auto c : {TranslationCase::unreachable, TranslationCase::degenerate, TranslationCase::mixer,
                       TranslationCase::znode})
            if (kind == to_string(c)) {
                t.kind = c;
                found = true;
            }
        if (!found)
            schema_error(w + ".case", "unknown case '" + kind + "'");
        t.flip = field(j, "flip", w).get<bool>();
        t.a0 = field(j, "a0", w).get<int>();
        t.p_in = rational_at(field(j, "p_in", w), w + ".p_in");
        t.p_lt = rational_at(field(j, "p_lt", w), w + ".p_lt");
        t.p_gt = rational_at(field(j, "p_gt", w), w + ".p_gt");
        t.tau_lt = rational_at(field(j, "tau_lt", w), w + ".tau_lt");
        t.tau_gt = rational_at(field(j, "tau_gt", w), w + ".tau_gt");
        t.q_in = rational_at(field(j, "q_in", w), w + ".q_in");
        t.p_star = decode_optional_rational(j, "p_star", w);
        t.polarity = field(j, "polarity", w).get<int>();
        t.gamma1 = decode_optional_rational(j, "gamma1", w);
        t.alpha_prime = decode_optional_rational(j, "alpha_prime", w);
        t.gamma2 = decode_optional_rational(j, "gamma2", w);
        t.gamma3 = decode_optional_rational(j, "gamma3", w);
        t.alpha0 = rational_at(field(j, "alpha0", w), w + ".alpha0");
        t.beta0 = rational_at(field(j, "beta0", w), w + ".beta0");
        return t;
    });
}

TransformResult decode_transform_result(const Json& j) {
    return guarded("transform", [&] {
        std::vector<NodeTranslation> ledger;
        if (const Json* l = optional_field(j, "ledger"))
            for (const auto& e : as_array(*l, "ledger"))
                ledger.push_back(decode_node_translation(e));
        PolarisedTree tree = decode_polarised_tree(field(j, "tree", "transform"));
        IsomorphismMap iso;
        if (const Json* m = optional_field(j, "isomorphism")) {
            iso = decode_isomorphism(*m);
        } else {
            for (NodeId v = 0; v < tree.size(); ++v)
                iso.x_to_z.push_back(v);
        }
        return TransformResult{std::move(tree), std::move(iso), std::move(ledger)};
    });
}

Instance decode_instance(const Json& j) {
    return guarded("instance", [&] {
        PromiseFunction g = decode_promise_function(field(j, "g", "instance"));
        if (const Json* mf = optional_field(j, "m"); mf && as_size(*mf, "instance.m") != g.m())
            schema_error("instance.m", "does not match the table of g");
        Distribution mu_g = decode_distribution(field(j, "mu_g", "instance"));
        std::optional<std::size_t> n;
        if (const Json* nf = optional_field(j, "n"))
            n = as_size(*nf, "instance.n");
        std::optional<Relation> f;
        if (const Json* ff = optional_field(j, "f")) {
            Json copy = *ff;
            if (n && !copy.contains("n"))
                copy["n"] = *n;
            f = decode_relation(copy);
            if (!n)
                n = f->n();
        }
        std::optional<XTree> protocol;
        if (const Json* pf = optional_field(j, "protocol"))
            protocol = decode_xtree(*pf, n, g.m());
        std::optional<Distribution> nu, mu_f;
        if (const Json* v = optional_field(j, "nu"))
            nu = decode_distribution(*v);
        if (const Json* v = optional_field(j, "mu_f"))
            mu_f = decode_distribution(*v);
        return Instance{std::move(g), std::move(mu_g), std::move(f), std::move(protocol), std::move(nu),
                        std::move(mu_f)};
    });
}

ProtocolReport decode_protocol_report(const Json& j) {
    return guarded("report", [&] {
        ProtocolReport r;
        r.error = rational_at(field(j, "error", "report"), "report.error");
        r.expected_queries = rational_at(field(j, "expected_queries", "report"), "report.expected_queries");
        for (const auto& q : as_array(field(j, "block_queries", "report"), "report.block_queries"))
            r.block_queries.push_back(rational_at(q, "report.block_queries"));
        for (const auto& p : as_array(field(j, "reach", "report"), "report.reach"))
            r.reach.push_back(rational_at(p, "report.reach"));
        if (const Json* zm = optional_field(j, "z_mass"))
            for (const auto& row : as_array(*zm, "report.z_mass")) {
                std::map<Bitstring, Rational> m;
                for (const auto& [key, w] : row.items())
                    m[Bitstring(key)] = rational_at(w, "report.z_mass");
                r.z_mass.push_back(std::move(m));
            }
        if (const Json* w = optional_field(j, "warnings"))
            for (const auto& s : as_array(*w, "report.warnings"))
                r.warnings.push_back(as_string(s, "report.warnings"));
        return r;
    });
}

VerificationReport decode_verification_report(const Json& j) {
    return guarded("verification", [&] {
        VerificationReport r;
        for (const auto& c : as_array(field(j, "checks", "verification"), "verification.checks")) {
            CheckResult item;
            item.name = as_string(field(c, "name", "check"), "check.name");
            item.pass = field(c, "pass", "check").get<bool>();
            if (const Json* w = optional_field(c, "witness"))
                item.witness = as_string(*w, "check.witness");
            if (const Json* v = optional_field(c, "vertex"))
                item.vertex = as_size(*v, "check.vertex");
            r.checks.push_back(std::move(item));
        }
        return r;
    });
}

HardnessCertificate decode_hardness_certificate(const Json& j) {
    return guarded("certificate", [&] {
        const Json& best = field(j, "best", "certificate");
        TreeProfile p{as_size(field(best, "tree_index", "best"), "best.tree_index"),
                      rational_at(field(best, "delta", "best"), "best.delta"),
                      rational_at(field(best, "d", "best"), "best.d")};
        return HardnessCertificate{decode_distribution(field(j, "mu", "certificate")),
                                   as_size(field(j, "m", "certificate"), "certificate.m"),
                                   as_size(field(j, "max_depth", "certificate"), "certificate.max_depth"),
                                   as_size(field(j, "family_size", "certificate"), "certificate.family_size"),
                                   rational_at(field(j, "score", "certificate"), "certificate.score"), std::move(p)};
    });
}

} // namespace qcomp
