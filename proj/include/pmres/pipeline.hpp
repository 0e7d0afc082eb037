#pragma once

#include <memory>
#include <optional>

#include "pmres/labeling.hpp"
#include "pmres/projection.hpp"
#include "pmres/quotient.hpp"

namespace pmres {

struct ResolveOptions {
    std::uint32_t seed_flag = 0;
    std::uint64_t max_states = 1000000;
};

struct ResolveOutcome {
    EnsureGoodResult labeled;
    std::shared_ptr<ResolutionEngine> engine;
    Component comp;
    QuotientComplex quotient;
    ManifoldReport manifold;
    std::vector<signed char> cube_signs;
    DegreeReport deg;
    CoveringReport covering;
};

// The full resolution pipeline: good labeling (subdividing when necessary),
// component exploration, quotient assembly and all verification passes.
inline ResolveOutcome resolve_pipeline(const PseudoManifold& pm,
                                       const std::optional<std::map<VertexId, int>>& coloring = std::nullopt,
                                       const std::optional<GoodLabeling>& labels = std::nullopt,
                                       const ResolveOptions& opts = {}) {
    ResolveOutcome out;
    out.labeled = ensure_good(pm, coloring, labels);
    out.engine = std::make_shared<ResolutionEngine>(out.labeled.pm, out.labeled.labeling);
    out.comp = explore_component(*out.engine, opts.seed_flag, opts.max_states);
    out.quotient = build_quotient(*out.engine, out.comp);
    out.manifold = verify_manifold(out.quotient);
    out.cube_signs = orient_quotient(out.quotient, out.comp);
    out.deg = degree(*out.engine, out.comp, out.cube_signs);
    out.covering = covering_check(*out.engine, out.comp, out.quotient);
    return out;
}

inline RealizationSummary realization_report(const ResolveOutcome& out) {
    RealizationSummary s;
    s.manifold_ok = out.manifold.ok();
    s.manifold_exact = out.manifold.exact;
    s.orientable = !out.cube_signs.empty();
    s.r = out.deg.r;
    s.abs_r = out.deg.abs_r;
    s.covering_confined = out.covering.confined_to_codim2();
    s.branch_point_count = out.covering.branch_points.size();
    s.component_size = out.comp.count;
    s.euler_m = out.quotient.euler_characteristic();
    s.euler_z = euler_characteristic(out.labeled.pm.complex);
    return s;
}

}  // namespace pmres
