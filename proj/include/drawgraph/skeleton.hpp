#pragma once

#include <string>

#include "drawgraph/raster.hpp"

namespace drawgraph {

// Thin an ink mask to single-pixel-wide trajectories. The only shipped
// method identifier is "zhang-suen"; unknown identifiers are rejected.
// Guarantees on the output:
//   - no 2x2 block is fully ink,
//   - the number of 8-connected components equals the input's,
//   - re-running the same method is a no-op (fixpoint).
BinaryRaster skeletonize(const BinaryRaster& mask, const std::string& method = "zhang-suen");

// Delete short endpoint branches (<= max_spur_len pixels) hanging off
// junctions. Isolated segments without a junction are left alone.
BinaryRaster remove_spurs(const BinaryRaster& skel, int max_spur_len);

} // namespace drawgraph
