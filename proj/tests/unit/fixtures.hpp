#pragma once

#include "ringwave/calibration.hpp"
#include "ringwave/core.hpp"

namespace ringwave::test {

/// Ring with the line calibrated to the default anchors.
inline RingSpec calibrated_ring(int n_cells = 3) {
    RingSpec ring;
    ring.n_cells = n_cells;
    ring.node_d = n_cells;
    ring.cell.line = calibrate_line(CalibrationAnchors{}, ring.cell.varactor.c0, ring.cell.d);
    return ring;
}

}  // namespace ringwave::test
