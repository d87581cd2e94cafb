#pragma once

#include <array>
#include <vector>

#include "drawgraph/geometry.hpp"
#include "drawgraph/trace.hpp"

namespace drawgraph {

// Parametric cubic with endpoints pinned to the source trace terminals.
struct CubicBezier {
    std::array<Vec2, 4> control;
    int source_trace = -1;
    VertexPair vertex_ids{-1, -1};

    Vec2 eval(double t) const;
    Vec2 derivative(double t) const;
    Vec2 second_derivative(double t) const;
};

struct SamplePoints {
    std::vector<Vec2> points;
    std::vector<double> params; // ascending, params[0]=0, params[n-1]=1
};

// Least-squares cubic through the trace pixels under chord-length
// parameterization, with the first and last control points fixed to the
// trace terminals. Degenerate interiors fall back to the straight segment.
CubicBezier fit_cubic_bezier(const Trace& t);

// Same solver on arbitrary ordered points (at least 4).
CubicBezier fit_cubic_bezier_points(const std::vector<Vec2>& pts);

// n points dividing the curve's arc length into n-1 equal parts; arc length
// is measured on a 256-segment uniform-parameter polyline.
SamplePoints sample_equal_arclength(const CubicBezier& c, int n);

double arc_length(const CubicBezier& c);

// Unsigned plane-curve curvature |x'y'' - y'x''| / speed^3; zero when the
// speed collapses below 1e-9.
double curvature_at(const CubicBezier& c, double t);

// Root-mean-square distance between curve points at the chord-length
// parameters of the pixels and the pixels themselves (the fit residual).
double rms_residual(const CubicBezier& c, const std::vector<Vec2>& pts);
double rms_residual(const CubicBezier& c, const Trace& t);

} // namespace drawgraph
