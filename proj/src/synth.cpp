#include "drawgraph/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>

#include "drawgraph/errors.hpp"
#include "drawgraph/jsonio.hpp"
#include "drawgraph/rng.hpp"

namespace drawgraph {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

Rgb sem_class_color(SemClass c) {
    switch (c) {
        case SemClass::Contour: return {0, 0, 0};
        case SemClass::Text: return {0, 255, 0};
        case SemClass::Dimension: return {255, 0, 0};
    }
    return {0, 0, 0};
}

std::string to_string(SemClass c) {
    switch (c) {
        case SemClass::Contour: return "contour";
        case SemClass::Text: return "text";
        case SemClass::Dimension: return "dimension";
    }
    return "?";
}

int sem_class_index(SemClass c, const LabelScheme& scheme) {
    if (scheme.kind == ClassScheme::TextNontext) return c == SemClass::Text ? 0 : 1;
    switch (c) {
        case SemClass::Contour: return 0;
        case SemClass::Text: return 1;
        case SemClass::Dimension: return 2;
    }
    return 0;
}

std::string to_string(Template t) {
    switch (t) {
        case Template::RectPlate: return "rect-plate";
        case Template::FlangedDisc: return "flanged-disc";
        case Template::LBracket: return "l-bracket";
    }
    return "?";
}

Template template_from_string(const std::string& s) {
    if (s == "rect-plate") return Template::RectPlate;
    if (s == "flanged-disc") return Template::FlangedDisc;
    if (s == "l-bracket") return Template::LBracket;
    throw DataError("unknown template: " + s);
}

namespace {

double dist_point_segment(Vec2 q, Vec2 a, Vec2 b) {
    Vec2 ab = b - a;
    double len2 = dot(ab, ab);
    if (len2 < 1e-12) return dist(q, a);
    double t = std::clamp(dot(q - a, ab) / len2, 0.0, 1.0);
    return dist(q, a + ab * t);
}

bool point_in_triangle(Vec2 q, Vec2 a, Vec2 b, Vec2 c) {
    double d1 = cross(b - a, q - a);
    double d2 = cross(c - b, q - b);
    double d3 = cross(a - c, q - c);
    bool has_neg = d1 < 0 || d2 < 0 || d3 < 0;
    bool has_pos = d1 > 0 || d2 > 0 || d3 > 0;
    return !(has_neg && has_pos);
}

double wrap_angle(double a) {
    while (a < 0) a += 2 * kPi;
    while (a >= 2 * kPi) a -= 2 * kPi;
    return a;
}

} // namespace

bool Primitive::covers(Vec2 q, double half_width) const {
    switch (shape) {
        case Shape::Segment:
            return dist_point_segment(q, p0, p1) <= half_width;
        case Shape::Circle:
            return std::abs(dist(q, p0) - radius) <= half_width;
        case Shape::Arc: {
            double d = dist(q, p0);
            if (std::abs(d - radius) <= half_width) {
                double ang = wrap_angle(std::atan2(q.y - p0.y, q.x - p0.x) - angle0);
                if (ang <= sweep) return true;
            }
            // round caps at the arc endpoints
            Vec2 e0 = p0 + Vec2{std::cos(angle0), std::sin(angle0)} * radius;
            Vec2 e1 = p0 + Vec2{std::cos(angle0 + sweep), std::sin(angle0 + sweep)} * radius;
            return dist(q, e0) <= half_width || dist(q, e1) <= half_width;
        }
        case Shape::Triangle:
            if (point_in_triangle(q, p0, p1, p2)) return true;
            // thin triangles still rasterize as at least a stroke
            return dist_point_segment(q, p0, p1) <= half_width ||
                   dist_point_segment(q, p1, p2) <= half_width ||
                   dist_point_segment(q, p2, p0) <= half_width;
    }
    return false;
}

void Scene::add_segment(SemClass cls, std::string kind, Vec2 a, Vec2 b) {
    Primitive p;
    p.shape = Primitive::Shape::Segment;
    p.cls = cls;
    p.kind = std::move(kind);
    p.p0 = a;
    p.p1 = b;
    prims.push_back(std::move(p));
}

void Scene::add_polyline(SemClass cls, std::string kind, const std::vector<Vec2>& pts) {
    for (std::size_t i = 1; i < pts.size(); ++i) add_segment(cls, kind, pts[i - 1], pts[i]);
}

void Scene::add_circle(SemClass cls, std::string kind, Vec2 center, double r) {
    Primitive p;
    p.shape = Primitive::Shape::Circle;
    p.cls = cls;
    p.kind = std::move(kind);
    p.p0 = center;
    p.radius = r;
    prims.push_back(std::move(p));
}

void Scene::add_arc(SemClass cls, std::string kind, Vec2 center, double r, double a0,
                    double sweep) {
    Primitive p;
    p.shape = Primitive::Shape::Arc;
    p.cls = cls;
    p.kind = std::move(kind);
    p.p0 = center;
    p.radius = r;
    p.angle0 = wrap_angle(a0);
    p.sweep = sweep;
    prims.push_back(std::move(p));
}

void Scene::add_triangle(SemClass cls, std::string kind, Vec2 a, Vec2 b, Vec2 c) {
    Primitive p;
    p.shape = Primitive::Shape::Triangle;
    p.cls = cls;
    p.kind = std::move(kind);
    p.p0 = a;
    p.p1 = b;
    p.p2 = c;
    prims.push_back(std::move(p));
}

namespace {

struct PrimBounds {
    int x0, y0, x1, y1;
};

PrimBounds bounds_of(const Primitive& p, double half_w, int width, int height) {
    double lo_x, lo_y, hi_x, hi_y;
    switch (p.shape) {
        case Primitive::Shape::Segment:
            lo_x = std::min(p.p0.x, p.p1.x);
            hi_x = std::max(p.p0.x, p.p1.x);
            lo_y = std::min(p.p0.y, p.p1.y);
            hi_y = std::max(p.p0.y, p.p1.y);
            break;
        case Primitive::Shape::Circle:
        case Primitive::Shape::Arc:
            lo_x = p.p0.x - p.radius;
            hi_x = p.p0.x + p.radius;
            lo_y = p.p0.y - p.radius;
            hi_y = p.p0.y + p.radius;
            break;
        case Primitive::Shape::Triangle:
        default:
            lo_x = std::min({p.p0.x, p.p1.x, p.p2.x});
            hi_x = std::max({p.p0.x, p.p1.x, p.p2.x});
            lo_y = std::min({p.p0.y, p.p1.y, p.p2.y});
            hi_y = std::max({p.p0.y, p.p1.y, p.p2.y});
            break;
    }
    PrimBounds b;
    b.x0 = std::max(0, int(std::floor(lo_x - half_w - 1)));
    b.y0 = std::max(0, int(std::floor(lo_y - half_w - 1)));
    b.x1 = std::min(width - 1, int(std::ceil(hi_x + half_w + 1)));
    b.y1 = std::min(height - 1, int(std::ceil(hi_y + half_w + 1)));
    return b;
}

} // namespace

GrayRaster Scene::render_gray() const {
    GrayRaster img(width, height, 255);
    double half_w = stroke_width / 2.0;
    for (const Primitive& p : prims) {
        PrimBounds b = bounds_of(p, half_w, width, height);
        for (int y = b.y0; y <= b.y1; ++y)
            for (int x = b.x0; x <= b.x1; ++x)
                if (p.covers({double(x), double(y)}, half_w)) img.at(x, y) = 0;
    }
    return img;
}

ColorRaster Scene::render_color() const {
    ColorRaster img(width, height, {255, 255, 255});
    double half_w = stroke_width / 2.0;
    for (const Primitive& p : prims) {
        Rgb color = sem_class_color(p.cls);
        PrimBounds b = bounds_of(p, half_w, width, height);
        for (int y = b.y0; y <= b.y1; ++y)
            for (int x = b.x0; x <= b.x1; ++x)
                if (p.covers({double(x), double(y)}, half_w)) img.at(x, y) = color;
    }
    return img;
}

std::optional<SemClass> Scene::classify_point(Vec2 q) const {
    double half_w = stroke_width / 2.0;
    for (auto it = prims.rbegin(); it != prims.rend(); ++it)
        if (it->covers(q, half_w)) return it->cls;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Stroke font
// ---------------------------------------------------------------------------

namespace {

using Strokes = std::vector<std::vector<Vec2>>;

std::vector<Vec2> oval(Vec2 c, double rx, double ry, int segs = 12) {
    std::vector<Vec2> pts;
    for (int i = 0; i <= segs; ++i) {
        double a = 2 * kPi * double(i) / segs;
        pts.push_back({c.x + rx * std::cos(a), c.y + ry * std::sin(a)});
    }
    return pts;
}

const std::map<char, Strokes>& glyph_table() {
    static const std::map<char, Strokes> table = [] {
        std::map<char, Strokes> t;
        t['0'] = {oval({0.31, 0.5}, 0.24, 0.45)};
        t['1'] = {{{0.14, 0.22}, {0.34, 0.05}, {0.34, 0.95}}};
        t['2'] = {{{0.08, 0.24},
                   {0.14, 0.09},
                   {0.32, 0.05},
                   {0.5, 0.12},
                   {0.54, 0.3},
                   {0.42, 0.52},
                   {0.08, 0.95},
                   {0.56, 0.95}}};
        t['3'] = {{{0.1, 0.12},
                   {0.3, 0.05},
                   {0.5, 0.14},
                   {0.5, 0.36},
                   {0.3, 0.48},
                   {0.52, 0.6},
                   {0.54, 0.82},
                   {0.32, 0.95},
                   {0.08, 0.86}}};
        t['4'] = {{{0.46, 0.95}, {0.46, 0.05}, {0.05, 0.62}, {0.58, 0.62}}};
        t['5'] = {{{0.52, 0.05},
                   {0.12, 0.05},
                   {0.1, 0.45},
                   {0.34, 0.38},
                   {0.54, 0.52},
                   {0.54, 0.76},
                   {0.34, 0.95},
                   {0.1, 0.88}}};
        t['6'] = {{{0.5, 0.08},
                   {0.28, 0.05},
                   {0.12, 0.26},
                   {0.08, 0.62},
                   {0.16, 0.9},
                   {0.36, 0.95},
                   {0.52, 0.8},
                   {0.5, 0.58},
                   {0.32, 0.5},
                   {0.1, 0.58}}};
        t['7'] = {{{0.08, 0.05}, {0.56, 0.05}, {0.22, 0.95}}};
        t['8'] = {oval({0.31, 0.27}, 0.18, 0.22), oval({0.31, 0.73}, 0.22, 0.23)};
        t['9'] = {{{0.12, 0.92},
                   {0.34, 0.95},
                   {0.5, 0.74},
                   {0.54, 0.38},
                   {0.46, 0.1},
                   {0.26, 0.05},
                   {0.1, 0.2},
                   {0.12, 0.42},
                   {0.3, 0.5},
                   {0.52, 0.42}}};
        t['.'] = {{{0.26, 0.84}, {0.32, 0.95}}};
        t['R'] = {{{0.1, 0.95}, {0.1, 0.05}, {0.42, 0.07}, {0.54, 0.24}, {0.42, 0.46}, {0.1, 0.48}},
                  {{0.26, 0.48}, {0.56, 0.95}}};
        // 'd' renders the diameter symbol, 'p' the plus/minus sign.
        t['d'] = {oval({0.31, 0.5}, 0.22, 0.34), {{0.06, 0.92}, {0.56, 0.08}}};
        t['p'] = {{{0.31, 0.08}, {0.31, 0.6}},
                  {{0.08, 0.34}, {0.54, 0.34}},
                  {{0.08, 0.82}, {0.54, 0.82}}};
        return t;
    }();
    return table;
}

constexpr double kGlyphAdvance = 0.78; // per glyph, relative to height

} // namespace

const std::vector<std::vector<Vec2>>& glyph_strokes(char key) {
    auto it = glyph_table().find(key);
    if (it == glyph_table().end())
        throw DataError(std::string("no glyph for character: ") + key);
    return it->second;
}

double text_width(const std::string& token, double h) {
    return double(token.size()) * kGlyphAdvance * h;
}

void add_text(Scene& scene, const std::string& token, Vec2 pos, double h) {
    double x = pos.x;
    for (char ch : token) {
        for (const auto& stroke : glyph_strokes(ch)) {
            std::vector<Vec2> pts;
            pts.reserve(stroke.size());
            for (Vec2 p : stroke) pts.push_back({x + p.x * h, pos.y + p.y * h});
            scene.add_polyline(SemClass::Text, "glyph", pts);
        }
        x += kGlyphAdvance * h;
    }
}

// Token rotated 90 degrees counter-clockwise (reads bottom-up), anchored at
// the bottom-left corner of the resulting column.
void add_text_rotated(Scene& scene, const std::string& token, Vec2 pos, double h) {
    double advance = 0.0;
    for (char ch : token) {
        for (const auto& stroke : glyph_strokes(ch)) {
            std::vector<Vec2> pts;
            pts.reserve(stroke.size());
            for (Vec2 p : stroke)
                pts.push_back({pos.x + p.y * h, pos.y - advance - p.x * h});
            scene.add_polyline(SemClass::Text, "glyph", pts);
        }
        advance += kGlyphAdvance * h;
    }
}

// ---------------------------------------------------------------------------
// Drawing templates
// ---------------------------------------------------------------------------

namespace {

Vec2 normalize_vec(Vec2 v) {
    double n = norm(v);
    return n > 0 ? v / n : Vec2{1, 0};
}

struct Builder {
    const DrawingSpec& spec;
    Rng rng;
    Scene scene;
    double w, h;       // canvas size
    double glyph_h;    // text height
    double arrow_len;  // arrowhead length (6..10 px at 1024 canvas)
    double arrow_w;
    int notes_placed = 0;

    explicit Builder(const DrawingSpec& s) : spec(s), rng(s.seed) {
        scene.width = s.canvas;
        scene.height = int(std::lround(s.canvas * 0.75));
        scene.stroke_width = s.stroke_width;
        w = scene.width;
        h = scene.height;
        glyph_h = 0.026 * w * rng.uniform(0.9, 1.1);
        arrow_len = rng.uniform(7.0, 10.0) * (w / 1024.0);
        arrow_w = arrow_len * 0.55;
    }

    void ensure_inside(Vec2 p) {
        if (p.x < 1 || p.y < 1 || p.x > w - 2 || p.y > h - 2)
            throw DataError("geometry overflow: feature outside canvas");
    }

    std::string random_token() {
        int pattern = rng.uniform_int(0, 3);
        auto digit = [&] { return char('0' + rng.uniform_int(0, 9)); };
        switch (pattern) {
            case 0: return {digit(), digit(), '.', digit()};
            case 1: return {'d', digit(), digit()};
            case 2: return {'R', digit(), '.', digit()};
            default: return {digit(), digit(), 'p', '0', '.', digit()};
        }
    }

    // Text positions are clamped into the canvas rather than erroring; a
    // label may overlap other geometry but never falls off the page.
    void place_token(const std::string& token, Vec2 center, bool rotated = false) {
        double tw = text_width(token, glyph_h);
        double bw = rotated ? glyph_h : tw; // box extents
        double bh = rotated ? tw : glyph_h;
        center.x = std::clamp(center.x, bw / 2 + 2.0, w - bw / 2 - 2.0);
        center.y = std::clamp(center.y, bh / 2 + 2.0, h - bh / 2 - 2.0);
        if (rotated)
            add_text_rotated(scene, token, {center.x - glyph_h / 2, center.y + tw / 2}, glyph_h);
        else
            add_text(scene, token, {center.x - tw / 2, center.y - glyph_h / 2}, glyph_h);
    }

    void arrow(Vec2 tip, Vec2 inward) {
        inward = normalize_vec(inward);
        Vec2 perp{-inward.y, inward.x};
        scene.add_triangle(SemClass::Dimension, "arrowhead", tip,
                           tip + inward * arrow_len + perp * (arrow_w / 2),
                           tip + inward * arrow_len - perp * (arrow_w / 2));
    }

    // Linear dimension measuring a..b, offset along the outward unit normal.
    void linear_dim(Vec2 a, Vec2 b, Vec2 out_normal, double offset, const std::string& token) {
        out_normal = normalize_vec(out_normal);
        double over = 6.0 * (w / 1024.0);
        Vec2 ea = a + out_normal * offset;
        Vec2 eb = b + out_normal * offset;
        ensure_inside(ea);
        ensure_inside(eb);
        scene.add_segment(SemClass::Dimension, "extension", a, a + out_normal * (offset + over));
        scene.add_segment(SemClass::Dimension, "extension", b, b + out_normal * (offset + over));
        scene.add_segment(SemClass::Dimension, "dimline", ea, eb);
        Vec2 u = normalize_vec(b - a);
        arrow(ea, u);
        arrow(eb, u * -1.0);
        if (!token.empty()) {
            bool vertical = std::abs(out_normal.x) > 0.5;
            place_token(token, (ea + eb) * 0.5 + out_normal * (glyph_h * 1.1), vertical);
        }
    }

    // Leader callout anchored on a circle at `angle`, text at the far end.
    void leader_dim(Vec2 center, double radius, double angle, const std::string& token) {
        Vec2 dir{std::cos(angle), std::sin(angle)};
        Vec2 anchor = center + dir * radius;
        double len = 0.085 * w;
        Vec2 tail = anchor + dir * len;
        ensure_inside(tail);
        scene.add_segment(SemClass::Dimension, "dimline", anchor, tail);
        arrow(anchor, dir);
        if (!token.empty()) {
            Vec2 shift = dir * (text_width(token, glyph_h) * 0.5 + glyph_h * 0.8);
            place_token(token, tail + shift);
        }
    }

    void center_cross(Vec2 c, double half_x, double half_y) {
        scene.add_segment(SemClass::Dimension, "centerline", {c.x - half_x, c.y},
                          {c.x + half_x, c.y});
        scene.add_segment(SemClass::Dimension, "centerline", {c.x, c.y - half_y},
                          {c.x, c.y + half_y});
    }

    void floating_note(const std::string& token) {
        if (notes_placed >= 5) throw DataError("geometry overflow: too many text tokens");
        double x = 0.1 * w + 0.17 * w * notes_placed;
        place_token(token, {x, 0.045 * h});
        ++notes_placed;
    }

    // Place circles in a box with pairwise and border clearance. The margin
    // covers the center-line overhang (1.55 r).
    std::vector<std::pair<Vec2, double>> place_holes(int count, Vec2 lo, Vec2 hi, double rmin,
                                                     double rmax) {
        std::vector<std::pair<Vec2, double>> holes;
        for (int i = 0; i < count; ++i) {
            bool placed = false;
            for (int attempt = 0; attempt < 300 && !placed; ++attempt) {
                double r = rng.uniform(rmin, rmax);
                double margin = 1.75 * r + 2.0;
                if (lo.x + margin >= hi.x - margin || lo.y + margin >= hi.y - margin) continue;
                Vec2 c{rng.uniform(lo.x + margin, hi.x - margin),
                       rng.uniform(lo.y + margin, hi.y - margin)};
                bool ok = true;
                for (const auto& [oc, orr] : holes)
                    if (dist(c, oc) < 1.6 * (r + orr) + 4.0) ok = false;
                if (!ok) continue;
                holes.push_back({c, r});
                placed = true;
            }
            if (!placed) throw DataError("geometry overflow: cannot place requested holes");
        }
        return holes;
    }

    void add_hole(Vec2 c, double r) {
        scene.add_circle(SemClass::Contour, "hole", c, r);
        center_cross(c, 1.55 * r, 1.55 * r);
    }
};

void build_rect_plate(Builder& b) {
    Rng& rng = b.rng;
    double pw = rng.uniform(0.42, 0.58) * b.w;
    double ph = rng.uniform(0.42, 0.58) * b.h;
    double x0 = (b.w - pw) / 2 + rng.uniform(-0.03, 0.03) * b.w;
    double y0 = (b.h - ph) / 2 + rng.uniform(-0.03, 0.03) * b.h;
    double x1 = x0 + pw, y1 = y0 + ph;

    b.scene.add_segment(SemClass::Contour, "outline", {x0, y0}, {x1, y0});
    b.scene.add_segment(SemClass::Contour, "outline", {x1, y0}, {x1, y1});
    b.scene.add_segment(SemClass::Contour, "outline", {x1, y1}, {x0, y1});
    b.scene.add_segment(SemClass::Contour, "outline", {x0, y1}, {x0, y0});

    auto holes = b.place_holes(b.spec.hole_count, {x0, y0}, {x1, y1}, 0.02 * b.w, 0.034 * b.w);
    for (auto& [c, r] : holes) b.add_hole(c, r);

    int catalog = 4 + int(holes.size());
    if (b.spec.dim_count > catalog)
        throw DataError("geometry overflow: dim_count exceeds template capacity");

    std::vector<std::string> tokens;
    for (int i = 0; i < b.spec.text_tokens; ++i) tokens.push_back(b.random_token());
    auto token_for = [&](int i) { return i < int(tokens.size()) ? tokens[std::size_t(i)] : std::string(); };

    for (int d = 0; d < b.spec.dim_count; ++d) {
        switch (d) {
            case 0:
                b.linear_dim({x0, y1}, {x1, y1}, {0, 1}, rng.uniform(0.07, 0.1) * b.h,
                             token_for(d));
                break;
            case 1:
                b.linear_dim({x1, y0}, {x1, y1}, {1, 0}, rng.uniform(0.06, 0.09) * b.w,
                             token_for(d));
                break;
            case 2:
                b.linear_dim({x0, y0}, {x1, y0}, {0, -1}, rng.uniform(0.07, 0.1) * b.h,
                             token_for(d));
                break;
            case 3:
                b.linear_dim({x0, y0}, {x0, y1}, {-1, 0}, rng.uniform(0.06, 0.09) * b.w,
                             token_for(d));
                break;
            default: {
                auto& [c, r] = holes[std::size_t(d) - 4];
                b.leader_dim(c, r, -kPi / 4 + rng.uniform(-0.3, 0.3), token_for(d));
                break;
            }
        }
    }
    for (int i = b.spec.dim_count; i < b.spec.text_tokens; ++i)
        b.floating_note(tokens[std::size_t(i)]);
}

void build_flanged_disc(Builder& b) {
    Rng& rng = b.rng;
    Vec2 c{b.w / 2 + rng.uniform(-0.02, 0.02) * b.w, b.h / 2 + rng.uniform(-0.02, 0.02) * b.h};
    double router = rng.uniform(0.28, 0.34) * b.h;
    double rbore = rng.uniform(0.33, 0.45) * router;
    double rpitch = (router + rbore) / 2;

    b.scene.add_circle(SemClass::Contour, "outline", c, router);
    b.scene.add_circle(SemClass::Contour, "outline", c, rbore);
    b.scene.add_circle(SemClass::Dimension, "pitch-circle", c, rpitch);
    b.center_cross(c, 1.12 * router, 1.12 * router);

    int nholes = std::max(0, b.spec.hole_count);
    double rhole = std::min(0.38 * (router - rbore) / 2 + 0.25 * (router - rbore) / 2,
                            0.45 * (router - rbore) / 2);
    double phase = rng.uniform(0.0, 2 * kPi);
    std::vector<std::pair<Vec2, double>> holes;
    for (int i = 0; i < nholes; ++i) {
        double a = phase + 2 * kPi * double(i) / std::max(1, nholes);
        Vec2 hc = c + Vec2{std::cos(a), std::sin(a)} * rpitch;
        holes.push_back({hc, rhole});
        b.scene.add_circle(SemClass::Contour, "hole", hc, rhole);
    }
    if (nholes > 12) throw DataError("geometry overflow: too many bolt holes");

    int catalog = 4 + int(holes.size());
    if (b.spec.dim_count > catalog)
        throw DataError("geometry overflow: dim_count exceeds template capacity");

    std::vector<std::string> tokens;
    for (int i = 0; i < b.spec.text_tokens; ++i) tokens.push_back(b.random_token());
    auto token_for = [&](int i) { return i < int(tokens.size()) ? tokens[std::size_t(i)] : std::string(); };

    for (int d = 0; d < b.spec.dim_count; ++d) {
        switch (d) {
            case 0:
                b.linear_dim({c.x - router, c.y}, {c.x + router, c.y}, {0, 1},
                             router + rng.uniform(0.06, 0.08) * b.h, token_for(d));
                break;
            case 1:
                b.linear_dim({c.x - rbore, c.y}, {c.x + rbore, c.y}, {0, -1},
                             router + rng.uniform(0.05, 0.07) * b.h, token_for(d));
                break;
            case 2:
                b.linear_dim({c.x, c.y - router}, {c.x, c.y + router}, {1, 0},
                             router + rng.uniform(0.05, 0.07) * b.w, token_for(d));
                break;
            case 3:
                b.linear_dim({c.x, c.y - rpitch}, {c.x, c.y + rpitch}, {-1, 0},
                             router + rng.uniform(0.04, 0.06) * b.w, token_for(d));
                break;
            default: {
                auto& [hc, hr] = holes[std::size_t(d) - 4];
                double a = std::atan2(hc.y - c.y, hc.x - c.x);
                b.leader_dim(hc, hr, a, token_for(d));
                break;
            }
        }
    }
    for (int i = b.spec.dim_count; i < b.spec.text_tokens; ++i)
        b.floating_note(tokens[std::size_t(i)]);
}

void build_l_bracket(Builder& b) {
    Rng& rng = b.rng;
    double total_h = rng.uniform(0.5, 0.6) * b.h;
    double foot_l = rng.uniform(0.45, 0.58) * b.w;
    double leg_t = rng.uniform(0.24, 0.32) * foot_l;
    double foot_t = rng.uniform(0.24, 0.32) * total_h;
    double x0 = (b.w - foot_l) / 2 + rng.uniform(-0.02, 0.02) * b.w;
    double y0 = (b.h - total_h) / 2 + rng.uniform(-0.02, 0.02) * b.h;

    Vec2 a{x0, y0}, p2{x0 + leg_t, y0}, p3{x0 + leg_t, y0 + total_h - foot_t},
        p4{x0 + foot_l, y0 + total_h - foot_t}, p5{x0 + foot_l, y0 + total_h},
        p6{x0, y0 + total_h};
    const Vec2 pts[6] = {a, p2, p3, p4, p5, p6};
    for (int i = 0; i < 6; ++i)
        b.scene.add_segment(SemClass::Contour, "outline", pts[i], pts[(i + 1) % 6]);

    // One hole in the vertical leg, the rest along the foot.
    std::vector<std::pair<Vec2, double>> holes;
    if (b.spec.hole_count >= 1) {
        auto leg = b.place_holes(1, {x0, y0}, {x0 + leg_t, y0 + total_h - foot_t}, 0.18 * leg_t,
                                 0.24 * leg_t);
        holes.insert(holes.end(), leg.begin(), leg.end());
    }
    if (b.spec.hole_count >= 2) {
        auto foot = b.place_holes(b.spec.hole_count - 1, {x0 + leg_t, y0 + total_h - foot_t},
                                  {x0 + foot_l, y0 + total_h}, 0.16 * foot_t, 0.24 * foot_t);
        holes.insert(holes.end(), foot.begin(), foot.end());
    }
    for (auto& [c, r] : holes) b.add_hole(c, r);

    int catalog = 4 + int(holes.size());
    if (b.spec.dim_count > catalog)
        throw DataError("geometry overflow: dim_count exceeds template capacity");

    std::vector<std::string> tokens;
    for (int i = 0; i < b.spec.text_tokens; ++i) tokens.push_back(b.random_token());
    auto token_for = [&](int i) { return i < int(tokens.size()) ? tokens[std::size_t(i)] : std::string(); };

    for (int d = 0; d < b.spec.dim_count; ++d) {
        switch (d) {
            case 0:
                b.linear_dim(a, p6, {-1, 0}, rng.uniform(0.06, 0.09) * b.w, token_for(d));
                break;
            case 1:
                b.linear_dim(p6, p5, {0, 1}, rng.uniform(0.07, 0.1) * b.h, token_for(d));
                break;
            case 2:
                b.linear_dim(a, p2, {0, -1}, rng.uniform(0.07, 0.1) * b.h, token_for(d));
                break;
            case 3:
                b.linear_dim(p4, p5, {1, 0}, rng.uniform(0.06, 0.09) * b.w, token_for(d));
                break;
            default: {
                auto& [c, r] = holes[std::size_t(d) - 4];
                b.leader_dim(c, r, -kPi / 4 + rng.uniform(-0.3, 0.3), token_for(d));
                break;
            }
        }
    }
    for (int i = b.spec.dim_count; i < b.spec.text_tokens; ++i)
        b.floating_note(tokens[std::size_t(i)]);
}

} // namespace

GeneratedDrawing generate(const DrawingSpec& spec) {
    if (spec.canvas < 256) throw DataError("canvas must be at least 256 px");
    if (spec.hole_count < 0 || spec.dim_count < 0 || spec.text_tokens < 0)
        throw DataError("spec counts must be non-negative");

    Builder b(spec);
    switch (spec.tmpl) {
        case Template::RectPlate: build_rect_plate(b); break;
        case Template::FlangedDisc: build_flanged_disc(b); break;
        case Template::LBracket: build_l_bracket(b); break;
    }

    GeneratedDrawing out;
    out.drawing = b.scene.render_gray();
    out.ground_truth = b.scene.render_color();
    out.scene = std::move(b.scene);
    return out;
}

DrawingSpec spec_for_seed(std::uint64_t seed, int canvas, double stroke_width) {
    Rng rng(seed ^ 0xd1b54a32d192ed03ULL);
    DrawingSpec spec;
    spec.seed = seed;
    spec.canvas = canvas;
    spec.stroke_width = stroke_width;
    spec.tmpl = Template(rng.uniform_int(0, 2));
    spec.hole_count = rng.uniform_int(1, 4);
    spec.dim_count = rng.uniform_int(2, 4);
    spec.text_tokens = rng.uniform_int(2, 5);
    return spec;
}

std::vector<CorpusEntry> generate_corpus(int count, std::uint64_t base_seed,
                                         const std::string& out_dir, int canvas,
                                         double stroke_width) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (!fs::is_directory(out_dir)) throw IoError("cannot create directory: " + out_dir);

    std::vector<CorpusEntry> entries;
    nlohmann::json index = nlohmann::json::array();
    for (int i = 0; i < count; ++i) {
        DrawingSpec spec = spec_for_seed(base_seed + std::uint64_t(i), canvas, stroke_width);
        GeneratedDrawing d = generate(spec);
        char name[32];
        std::snprintf(name, sizeof name, "%04d", i);
        CorpusEntry e;
        e.spec = spec;
        e.draw_file = std::string(name) + "_draw.png";
        e.gt_file = std::string(name) + "_gt.png";
        save_png(d.drawing, (fs::path(out_dir) / e.draw_file).string());
        save_png(d.ground_truth, (fs::path(out_dir) / e.gt_file).string());
        index.push_back({{"seed", spec.seed},
                         {"canvas", spec.canvas},
                         {"template", to_string(spec.tmpl)},
                         {"hole_count", spec.hole_count},
                         {"dim_count", spec.dim_count},
                         {"text_tokens", spec.text_tokens},
                         {"stroke_width", spec.stroke_width},
                         {"draw", e.draw_file},
                         {"gt", e.gt_file}});
        entries.push_back(std::move(e));
    }
    write_json_atomic(index, (fs::path(out_dir) / "index.json").string());
    return entries;
}

std::vector<CorpusEntry> load_corpus_index(const std::string& index_path) {
    nlohmann::json index = read_json(index_path);
    std::vector<CorpusEntry> entries;
    try {
        for (const auto& row : index) {
            CorpusEntry e;
            e.spec.seed = row.at("seed").get<std::uint64_t>();
            e.spec.canvas = row.at("canvas").get<int>();
            e.spec.tmpl = template_from_string(row.at("template").get<std::string>());
            e.spec.hole_count = row.at("hole_count").get<int>();
            e.spec.dim_count = row.at("dim_count").get<int>();
            e.spec.text_tokens = row.at("text_tokens").get<int>();
            e.spec.stroke_width = row.at("stroke_width").get<double>();
            e.draw_file = row.at("draw").get<std::string>();
            e.gt_file = row.at("gt").get<std::string>();
            entries.push_back(std::move(e));
        }
    } catch (const nlohmann::json::exception& ex) {
        throw DataError("malformed corpus index " + index_path + ": " + ex.what());
    }
    return entries;
}

} // namespace drawgraph
