#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "drawgraph/geometry.hpp"
#include "drawgraph/raster.hpp"

namespace drawgraph {

// Skeleton pixel role, decided by the number of ink 8-neighbors:
// 0 -> Isolated, 1 -> End, 2 -> Passing, >=3 -> Junction.
enum class PixelKind : std::uint8_t { End, Passing, Junction, Isolated };

PixelKind kind_for_degree(int degree);
std::string to_string(PixelKind k);

// Ordered pixel path between termination points. Consecutive pixels are
// 8-adjacent; interior pixels are Passing.
struct Trace {
    std::vector<Px> pixels;
    PixelKind start_kind = PixelKind::End;
    PixelKind end_kind = PixelKind::End;
    bool cyclic = false;

    int length() const { return int(pixels.size()); }
    Px start() const { return pixels.front(); }
    Px end() const { return pixels.back(); }
};

struct TraceEnd {
    int trace = 0;
    int end = 0; // 0 = start pixel, 1 = end pixel
};

// Terminal points merged within a radius. Non-cyclic traces contribute two
// ends each; a cyclic trace owns a dedicated vertex with no registered ends.
struct Vertex {
    Vec2 position;
    std::vector<TraceEnd> ends;
};

struct VertexSet {
    std::vector<Vertex> vertices;
};

// Vertex ids assigned to a trace by prune_and_merge, ordered (start, end).
using VertexPair = std::pair<int, int>;

std::vector<std::vector<PixelKind>> classify_pixels(const BinaryRaster& skel);

// Walks every non-junction ink pixel exactly once. Junction pixels terminate
// traces and may appear as the terminal pixel of several traces. Pure cycles
// come back as a single cyclic trace seeded at the first pixel in row-major
// order.
std::vector<Trace> extract_traces(const BinaryRaster& skel);

// Split a trace wherever the second difference of the terminal-subtended
// angle spikes above the threshold at a strict local maximum. Traces shorter
// than 5 pixels and cyclic traces are returned unchanged.
std::vector<Trace> split_at_corners(const Trace& t, double spike_threshold);

// Corner indices used by split_at_corners, exposed for inspection.
std::vector<int> corner_indices(const Trace& t, double spike_threshold);

struct PrunedTraces {
    std::vector<Trace> traces;
    std::vector<VertexPair> trace_vertices; // parallel to traces
    VertexSet vertices;
};

// Drop traces shorter than 4 pixels, then union terminal points within
// merge_radius of each other (transitive closure) into shared vertices.
PrunedTraces prune_and_merge(const std::vector<Trace>& traces, double merge_radius);

// Debug dump: JSON array of {pixels, start_kind, end_kind, cyclic}.
std::string traces_to_json(const std::vector<Trace>& traces);

} // namespace drawgraph
