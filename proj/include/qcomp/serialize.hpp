#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "qcomp/eval.hpp"
#include "qcomp/hardness.hpp"
#include "qcomp/instance.hpp"
#include "qcomp/transform.hpp"
#include "qcomp/verify.hpp"

namespace qcomp {

using Json = nlohmann::json;

// Rationals are "num/den" strings. Block, bit and index fields are 0-based in
// every document; the library itself is 1-based.

/// Throws ParseError carrying the line and column of a syntax error.
Json parse_json(std::string_view text);
Json read_json_file(const std::string& path);
/// Pretty-printed with sorted keys and a trailing newline.
std::string dump_json(const Json& j);

Json encode(const Rational& r);
Json encode(const Distribution& d);
Json encode(const PromiseFunction& g);
Json encode(const Relation& f);
Json encode(const XTree& t);
Json encode(const PolarisedTree& t);
Json encode(const IsomorphismMap& m);
Json encode(const NodeTranslation& t);
Json encode(const TransformResult& r);
Json encode(const Instance& in);
Json encode(const ProtocolReport& r);
Json encode(const VerificationReport& r);
Json encode(const HardnessCertificate& c, const TreeFamily* family = nullptr);
Json encode(const SearchResult& r, const TreeFamily* family = nullptr);
Json encode(const std::vector<ComputationalPath>& paths, std::size_t n);

Rational decode_rational(const Json& j);
Distribution decode_distribution(const Json& j);
PromiseFunction decode_promise_function(const Json& j);
Relation decode_relation(const Json& j);
/// n and m may come from an enclosing instance document.
XTree decode_xtree(const Json& j, std::optional<std::size_t> n = std::nullopt,
                   std::optional<std::size_t> m = std::nullopt);
PolarisedTree decode_polarised_tree(const Json& j);
IsomorphismMap decode_isomorphism(const Json& j);
NodeTranslation decode_node_translation(const Json& j);
TransformResult decode_transform_result(const Json& j);
Instance decode_instance(const Json& j);
ProtocolReport decode_protocol_report(const Json& j);
VerificationReport decode_verification_report(const Json& j);
HardnessCertificate decode_hardness_certificate(const Json& j);

} // namespace qcomp
