#pragma once

#include <string>
#include <vector>

#include "fssqm/model.hpp"

namespace fssqm {

/// One audited operator identity.  `reference` states the identity itself
/// (ASCII, with ' for the adjoint).  Structurally exact relations carry a
/// fixed 1e-12 tolerance; integer-valued checks use exact equality
/// (tolerance 0); everything else uses the caller's tol_rel.
struct RelationResult {
    std::string name;
    std::string reference;
    double residual = 0.0;
    double tolerance = 0.0;
    bool passed = false;
};

/// Evaluate every defining identity of the model on the safe block and
/// report scaled residuals.  Failures are results, not exceptions.
std::vector<RelationResult> audit(const FssqmModel& model, double tol_rel);

bool all_passed(const std::vector<RelationResult>& results);

}  // namespace fssqm
