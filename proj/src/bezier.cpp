#include "drawgraph/bezier.hpp"

#include <algorithm>
#include <cmath>

#include "drawgraph/errors.hpp"

namespace drawgraph {

namespace {

constexpr int kArcSegments = 256;

// Bernstein basis of degree 3.
double b0(double t) { return (1 - t) * (1 - t) * (1 - t); }
double b1(double t) { return 3 * t * (1 - t) * (1 - t); }
double b2(double t) { return 3 * t * t * (1 - t); }
double b3(double t) { return t * t * t; }

std::vector<double> chord_length_params(const std::vector<Vec2>& pts) {
    std::vector<double> t(pts.size(), 0.0);
    double total = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        total += dist(pts[i - 1], pts[i]);
        t[i] = total;
    }
    if (total > 0)
        for (double& v : t) v /= total;
    t.back() = 1.0;
    return t;
}

} // namespace

Vec2 CubicBezier::eval(double t) const {
    return control[0] * b0(t) + control[1] * b1(t) + control[2] * b2(t) + control[3] * b3(t);
}

Vec2 CubicBezier::derivative(double t) const {
    Vec2 d0 = control[1] - control[0];
    Vec2 d1 = control[2] - control[1];
    Vec2 d2 = control[3] - control[2];
    double u = 1 - t;
    return (d0 * (u * u) + d1 * (2 * u * t) + d2 * (t * t)) * 3.0;
}

Vec2 CubicBezier::second_derivative(double t) const {
    Vec2 a = control[2] - control[1] * 2.0 + control[0];
    Vec2 b = control[3] - control[2] * 2.0 + control[1];
    return (a * (1 - t) + b * t) * 6.0;
}

CubicBezier fit_cubic_bezier_points(const std::vector<Vec2>& pts) {
    if (pts.size() < 4) throw DataError("fit_cubic_bezier requires at least 4 points");

    CubicBezier c;
    c.control[0] = pts.front();
    c.control[3] = pts.back();

    std::vector<double> t = chord_length_params(pts);

    // Constrained least squares: only x1, x2 are free. Normal equations of
    // the m x 2 system A [x1;x2] = p - B0*x0 - B3*x3.
    double a11 = 0, a12 = 0, a22 = 0;
    Vec2 r1{0, 0}, r2{0, 0};
    for (std::size_t k = 0; k < pts.size(); ++k) {
        double f1 = b1(t[k]), f2 = b2(t[k]);
        Vec2 rhs = pts[k] - c.control[0] * b0(t[k]) - c.control[3] * b3(t[k]);
        a11 += f1 * f1;
        a12 += f1 * f2;
        a22 += f2 * f2;
        r1 = r1 + rhs * f1;
        r2 = r2 + rhs * f2;
    }
    double det = a11 * a22 - a12 * a12;
    double scale = std::max(a11, a22);
    if (det <= 1e-12 * std::max(scale * scale, 1e-12)) {
        // Degenerate interior: fall back to the straight segment.
        Vec2 d = (c.control[3] - c.control[0]) / 3.0;
        c.control[1] = c.control[0] + d;
        c.control[2] = c.control[0] + d * 2.0;
        return c;
    }
    c.control[1] = (r1 * a22 - r2 * a12) / det;
    c.control[2] = (r2 * a11 - r1 * a12) / det;
    return c;
}

CubicBezier fit_cubic_bezier(const Trace& t) {
    std::vector<Vec2> pts;
    pts.reserve(t.pixels.size());
    for (Px p : t.pixels) pts.push_back(p.to_vec());
    return fit_cubic_bezier_points(pts);
}

namespace {

// Cumulative polyline length at uniform parameters i/kArcSegments.
std::vector<double> arc_table(const CubicBezier& c) {
    std::vector<double> cum(kArcSegments + 1, 0.0);
    Vec2 prev = c.eval(0.0);
    for (int i = 1; i <= kArcSegments; ++i) {
        Vec2 p = c.eval(double(i) / kArcSegments);
        cum[std::size_t(i)] = cum[std::size_t(i) - 1] + dist(prev, p);
        prev = p;
    }
    return cum;
}

} // namespace

double arc_length(const CubicBezier& c) { return arc_table(c).back(); }

SamplePoints sample_equal_arclength(const CubicBezier& c, int n) {
    if (n < 2) throw DataError("sample_equal_arclength requires n >= 2");
    SamplePoints s;
    s.points.reserve(std::size_t(n));
    s.params.reserve(std::size_t(n));

    std::vector<double> cum = arc_table(c);
    double total = cum.back();

    for (int j = 0; j < n; ++j) {
        double tt;
        if (j == 0) {
            tt = 0.0;
        } else if (j == n - 1) {
            tt = 1.0;
        } else if (total < 1e-12) {
            tt = double(j) / (n - 1);
        } else {
            double target = total * double(j) / (n - 1);
            auto it = std::lower_bound(cum.begin(), cum.end(), target);
            int hi = int(it - cum.begin());
            if (hi == 0) hi = 1;
            double seg = cum[std::size_t(hi)] - cum[std::size_t(hi) - 1];
            double frac = seg > 0 ? (target - cum[std::size_t(hi) - 1]) / seg : 0.0;
            tt = (double(hi) - 1.0 + frac) / kArcSegments;
        }
        s.params.push_back(tt);
        s.points.push_back(c.eval(tt));
    }
    return s;
}

double curvature_at(const CubicBezier& c, double t) {
    Vec2 d = c.derivative(t);
    Vec2 dd = c.second_derivative(t);
    double speed2 = d.x * d.x + d.y * d.y;
    if (std::sqrt(speed2) < 1e-9) return 0.0;
    return std::abs(d.x * dd.y - d.y * dd.x) / (speed2 * std::sqrt(speed2));
}

double rms_residual(const CubicBezier& c, const std::vector<Vec2>& pts) {
    std::vector<double> t = chord_length_params(pts);
    double sum = 0.0;
    for (std::size_t k = 0; k < pts.size(); ++k) {
        double d = dist(c.eval(t[k]), pts[k]);
        sum += d * d;
    }
    return std::sqrt(sum / double(pts.size()));
}

double rms_residual(const CubicBezier& c, const Trace& t) {
    std::vector<Vec2> pts;
    pts.reserve(t.pixels.size());
    for (Px p : t.pixels) pts.push_back(p.to_vec());
    return rms_residual(c, pts);
}

} // namespace drawgraph
