#pragma once

#include "heunlock/torusflow.hpp"

#include <string>
#include <utility>
#include <vector>

namespace heunlock {

struct PortraitSpec {
    double omega = 0.7;
    double B_min = -4.0, B_max = 4.0;
    double A_min = 0.0, A_max = 10.0;
    int nB = 200, nA = 200;
    int periods = 4000;
    double tol = 1e-12;
    /// Period-map iteration (one monodromy per cell) instead of direct
    /// integration of the torus field for every period.
    bool fast = true;
    unsigned long seed = 0; ///< recorded in headers only; the grid is deterministic
};

struct PortraitCell {
    double B = 0.0;
    double A = 0.0;
    double rho = 0.0;
    double conf = 0.0;
    bool ok = false;
};

struct Portrait {
    PortraitSpec spec;
    std::vector<PortraitCell> cells; ///< index iA * nB + iB

    const PortraitCell& at(int iB, int iA) const;
    /// max |rho(B, A) + rho(-B, A)| over mirrored cells (needs a B range
    /// symmetric about 0).
    double symmetry_defect() const;
    std::string to_csv() const;
    std::string to_svg(int width, int height,
                       const std::vector<std::pair<double, double>>& adjacencies = {}) const;
};

/// Grid coordinate i of n points on [lo, hi]; exactly antisymmetric when lo = -hi.
double grid_coordinate(double lo, double hi, int i, int n);

Portrait portrait(const PortraitSpec& spec);
Portrait portrait_serial(const PortraitSpec& spec);

} // namespace heunlock
