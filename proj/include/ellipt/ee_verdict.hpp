#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ellipt/ellipse.hpp"

namespace ellipt {

enum class EeOutcome { Inside, Outside, QInside };

const char* to_string(EeOutcome o);

/// Three-way outcome of Problem EE at factor q.  Outside always carries a
/// separating direction whose separation margin was re-verified when the
/// verdict was emitted; QInside(q) certifies q E0 in P with E0 in P left
/// undecided.
struct EeVerdict {
    EeOutcome outcome = EeOutcome::QInside;
    double factor = 0.0;                 // certified factor
    std::optional<Vec> direction;        // separating direction (Outside)
    double margin = 0.0;                 // separation margin at `direction`
    std::vector<std::pair<double, double>> corner_norms;  // (angle, norm) table
    std::string method;

    bool inside() const { return outcome == EeOutcome::Inside; }
    bool outside() const { return outcome == EeOutcome::Outside; }
};

}  // namespace ellipt
