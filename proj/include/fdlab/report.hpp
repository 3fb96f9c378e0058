#pragma once

#include <string>
#include <nlohmann/json.hpp>

namespace fdlab {

/// One named quantitative verdict: what was measured, what bound it was held
/// against, and whether the check-specific predicate passed.  `metadata`
/// carries run parameters and grid/ensemble provenance.
struct CheckReport {
    std::string name;
    nlohmann::json measured;   // number, array or object of measured values
    nlohmann::json bound;      // the bound(s) the measurement is compared to
    bool passed = false;
    double tolerance = 0.0;
    nlohmann::json metadata;   // run parameters
    nlohmann::json provenance; // grid, dt, eps, seed

    nlohmann::json to_json() const {
        return {{"name", name},           {"passed", passed},
                {"measured", measured},   {"bound", bound},
                {"tolerance", tolerance}, {"params", metadata},
                {"provenance", provenance}};
    }
};

} // namespace fdlab
