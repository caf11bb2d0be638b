#pragma once

#include <optional>

#include "qcomp/problems.hpp"
#include "qcomp/trees.hpp"

namespace qcomp {

/// Everything an instance file can describe. Only g and mu_g are mandatory.
struct Instance {
    PromiseFunction g;
    Distribution mu_g;
    std::optional<Relation> f;
    std::optional<XTree> protocol;
    std::optional<Distribution> nu;
    std::optional<Distribution> mu_f;
};

} // namespace qcomp
