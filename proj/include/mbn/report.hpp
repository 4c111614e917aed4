#pragma once

#include <cmath>
#include <string>

#include <json.hpp>

#include "metrics.hpp"
#include "motif_catalog.hpp"

namespace mbn {

inline nlohmann::json finite_or_null(double x)
{
    return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr);
}

/// Classes, adaptation matrix F and the sparse pre-motif transition table G.
inline nlohmann::json catalog_json(const MotifCatalog& cat)
{
    nlohmann::json j;
    j["motif_size"] = cat.motif_size();
    j["class_count"] = cat.class_count();
    j["premotif_count"] = cat.premotif_count();
    auto& classes = j["classes"] = nlohmann::json::array();
    for (std::size_t c = 0; c < cat.class_count(); ++c) {
        const MotifId m = MotifId::from_index(c);
        std::vector<int> targets;
        for (std::size_t t = 0; t < cat.class_count(); ++t)
            if (cat.adapts(m, MotifId::from_index(t)))
                targets.push_back(MotifId::from_index(t).value);
        classes.push_back({{"id", m.value},
                           {"edges", cat.edge_count(m)},
                           {"canonical_code", cat.canonical_code(m)},
                           {"adapts_to", targets}});
    }
    auto& g = j["transitions"] = nlohmann::json::array();
    for (std::uint32_t r = 0; r < cat.premotif_count(); ++r) {
        const auto& t = cat.transition(r);
        g.push_back({{"premotif", r}, {"code", cat.premotif_code(r)}, {"destroyed", t.destroyed.value},
                     {"formed", t.formed.value}});
    }
    return j;
}

inline nlohmann::json census_json(const MotifCensus& c)
{
    nlohmann::json j;
    j["motif_size"] = c.motif_size;
    j["total"] = c.total();
    j["counts"] = c.counts;
    return j;
}

inline nlohmann::json small_worldness_json(const SmallWorldnessReport& r)
{
    return {{"S", finite_or_null(r.s)},       {"C", finite_or_null(r.c)},
            {"L", finite_or_null(r.l)},       {"C_rand", finite_or_null(r.c_rand)},
            {"L_rand", finite_or_null(r.l_rand)}, {"reference_samples", r.n_reference}};
}

inline nlohmann::json modularity_json(const ModularityReport& r)
{
    return {{"Q", finite_or_null(r.q)},
            {"variant", r.variant == ModularityVariant::full ? "full" : "simplified"},
            {"n_clust", r.partition.n_clust},
            {"intra_edges", r.intra_edges},
            {"inter_edges", r.inter_edges},
            {"assignment", r.partition.assignment}};
}

} // namespace mbn
