#include "drawgraph/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "drawgraph/errors.hpp"
#include "drawgraph/jsonio.hpp"

namespace drawgraph {

namespace {

constexpr Rgb kBlack{0, 0, 0};
constexpr Rgb kGreen{0, 255, 0};
constexpr Rgb kRed{255, 0, 0};
constexpr Rgb kWhite{255, 255, 255};

long sq_dist(Rgb a, Rgb b) {
    long dr = long(a.r) - b.r, dg = long(a.g) - b.g, db = long(a.b) - b.b;
    return dr * dr + dg * dg + db * db;
}

// Colors farther than this from every palette entry are "other colored
// lines" rather than a noisy palette read.
constexpr long kSnapTolerance = 3L * 60L * 60L;

} // namespace

int LabelScheme::num_classes() const { return kind == ClassScheme::TextNontext ? 2 : 3; }

std::string LabelScheme::class_name(int cls) const {
    if (kind == ClassScheme::TextNontext) return cls == 0 ? "text" : "non-text";
    switch (cls) {
        case 0: return "contour";
        case 1: return "text";
        default: return "dimension";
    }
}

Rgb LabelScheme::class_color(int cls) const {
    if (kind == ClassScheme::TextNontext) return cls == 0 ? kGreen : kBlack;
    switch (cls) {
        case 0: return kBlack;
        case 1: return kGreen;
        default: return kRed;
    }
}

std::optional<int> LabelScheme::classify_color(Rgb c) const {
    const Rgb palette[3] = {kBlack, kGreen, kRed};
    long best = sq_dist(c, palette[0]);
    int best_i = 0;
    for (int i = 1; i < 3; ++i) {
        long d = sq_dist(c, palette[i]);
        if (d < best) {
            best = d;
            best_i = i;
        }
    }
    if (sq_dist(c, kWhite) < best) return std::nullopt; // background
    // best_i indexes {contour, text, dimension}; distant colors are dimension
    // class ("all other colored lines").
    int three_cls = best > kSnapTolerance ? 2 : best_i;
    if (kind == ClassScheme::TextContourDimension) return three_cls;
    return three_cls == 1 ? 0 : 1; // text vs non-text
}

std::string to_string(ClassScheme s) {
    return s == ClassScheme::TextNontext ? "text-nontext" : "text-contour-dimension";
}

ClassScheme scheme_from_string(const std::string& s) {
    if (s == "text-nontext") return ClassScheme::TextNontext;
    if (s == "text-contour-dimension") return ClassScheme::TextContourDimension;
    throw DataError("unknown class scheme: " + s);
}

Normalization compute_normalization(const std::vector<CubicBezier>& curves) {
    if (curves.empty()) throw DataError("degenerate drawing: no components");
    Vec2 lo{1e300, 1e300}, hi{-1e300, -1e300};
    for (const CubicBezier& c : curves) {
        for (Vec2 p : c.control) {
            lo.x = std::min(lo.x, p.x);
            lo.y = std::min(lo.y, p.y);
            hi.x = std::max(hi.x, p.x);
            hi.y = std::max(hi.y, p.y);
        }
    }
    double extent = std::max(hi.x - lo.x, hi.y - lo.y);
    if (extent <= 0.0) throw DataError("degenerate drawing: zero-extent bounding box");
    return {1.0 / extent, lo};
}

std::vector<CubicBezier> normalize_components(const std::vector<CubicBezier>& curves,
                                              Normalization& used) {
    used = compute_normalization(curves);
    std::vector<CubicBezier> out = curves;
    for (CubicBezier& c : out)
        for (Vec2& p : c.control) p = used.apply(p);
    return out;
}

std::vector<CubicBezier> normalize_components(const std::vector<CubicBezier>& curves) {
    Normalization n;
    return normalize_components(curves, n);
}

std::vector<double> featurize(const CubicBezier& c, int n) {
    if (n < 4) throw DataError("featurize requires n >= 4");
    SamplePoints s = sample_equal_arclength(c, n);

    std::vector<double> f;
    f.reserve(std::size_t(5 * n - 1));
    for (const Vec2& p : s.points) {
        f.push_back(p.x);
        f.push_back(p.y);
    }
    for (int i = 1; i < n; ++i) f.push_back(dist(s.points[std::size_t(i) - 1], s.points[std::size_t(i)]));

    double total = arc_length(c);
    f.push_back(total);

    bool degenerate = total < 1e-12;
    double chord = dist(s.points.front(), s.points.back());
    f.push_back(degenerate ? 1.0 : std::min(1.0, chord / total));

    for (int i = 1; i <= n - 2; ++i) {
        Vec2 a = s.points[std::size_t(i)] - s.points[std::size_t(i) - 1];
        Vec2 b = s.points[std::size_t(i) + 1] - s.points[std::size_t(i)];
        double na = norm(a), nb = norm(b);
        if (degenerate || na < 1e-12 || nb < 1e-12) {
            f.push_back(1.0);
        } else {
            f.push_back(std::clamp(dot(a, b) / (na * nb), -1.0, 1.0));
        }
    }
    for (double t : s.params) f.push_back(curvature_at(c, t));
    return f;
}

ComponentGraph build_graph(const std::vector<CubicBezier>& curves, const VertexSet& vertices,
                           int n) {
    ComponentGraph g;
    g.n = n;
    g.nodes.reserve(curves.size());
    for (const CubicBezier& c : curves) g.nodes.push_back({c, featurize(c, n)});

    // Incident component set per vertex; clique per shared terminal.
    std::vector<std::set<int>> incident(vertices.vertices.size());
    for (int i = 0; i < int(curves.size()); ++i) {
        auto [a, b] = curves[std::size_t(i)].vertex_ids;
        if (a >= 0 && a < int(incident.size())) incident[std::size_t(a)].insert(i);
        if (b >= 0 && b < int(incident.size())) incident[std::size_t(b)].insert(i);
    }
    std::set<std::pair<int, int>> edges;
    for (const auto& s : incident)
        for (auto it = s.begin(); it != s.end(); ++it)
            for (auto jt = std::next(it); jt != s.end(); ++jt) edges.insert({*it, *jt});
    g.edges.assign(edges.begin(), edges.end());
    return g;
}

void label_from_ground_truth(ComponentGraph& g, const ColorRaster& gt, const LabelScheme& scheme,
                             const Similarity& pixel_transform) {
    g.scheme = scheme;
    g.labels.clear();
    g.labels.reserve(g.nodes.size());

    auto read_class = [&](int px, int py) -> std::optional<int> {
        if (!gt.in_bounds(px, py)) return std::nullopt;
        return scheme.classify_color(gt.at(px, py));
    };

    for (int ni = 0; ni < g.num_nodes(); ++ni) {
        SamplePoints s = sample_equal_arclength(g.nodes[std::size_t(ni)].bezier, g.n);
        std::vector<int> votes(std::size_t(scheme.num_classes()), 0);
        int total_votes = 0;
        for (const Vec2& sp : s.points) {
            Vec2 rp = pixel_transform.apply(sp);
            int px = int(std::lround(rp.x));
            int py = int(std::lround(rp.y));
            std::optional<int> cls = read_class(px, py);
            if (!cls) {
                // Background read: nearest palette-colored pixel in a 3 px
                // window, scanned in deterministic distance order.
                double best_d = 1e300;
                for (int dy = -3; dy <= 3 && !cls; ++dy) {
                    for (int dx = -3; dx <= 3; ++dx) {
                        double d = double(dx) * dx + double(dy) * dy;
                        if (d > 9.0 + 1e-9 || d >= best_d) continue;
                        auto c = read_class(px + dx, py + dy);
                        if (c) {
                            best_d = d;
                            cls = c;
                        }
                    }
                }
            }
            if (cls) {
                ++votes[std::size_t(*cls)];
                ++total_votes;
            }
        }
        if (total_votes == 0)
            throw DataError("ground-truth labeling: node " + std::to_string(ni) +
                            " has no palette-colored pixels near its samples");
        int best = 0;
        for (int c = 1; c < int(votes.size()); ++c)
            if (votes[std::size_t(c)] > votes[std::size_t(best)]) best = c;
        g.labels.push_back(best);
    }
}

void save_graph(const ComponentGraph& g, const std::string& path) {
    nlohmann::json j;
    j["version"] = 1;
    j["n"] = g.n;
    j["scheme"] = to_string(g.scheme.kind);
    nlohmann::json nodes = nlohmann::json::array();
    for (const GraphNode& node : g.nodes) {
        nlohmann::json control = nlohmann::json::array();
        for (Vec2 p : node.bezier.control) control.push_back({p.x, p.y});
        nodes.push_back({{"control", control}, {"features", node.features}});
    }
    j["nodes"] = std::move(nodes);
    nlohmann::json edges = nlohmann::json::array();
    for (auto [a, b] : g.edges) edges.push_back({a, b});
    j["edges"] = std::move(edges);
    if (g.has_labels()) j["labels"] = g.labels;
    j["provenance"] = g.provenance;
    write_json_atomic(j, path);
}

ComponentGraph load_graph(const std::string& path) {
    nlohmann::json j = read_json(path);
    try {
        if (!j.contains("version") || j["version"].get<int>() != 1)
            throw DataError("graph file version mismatch: " + path);
        ComponentGraph g;
        g.n = j.at("n").get<int>();
        g.scheme.kind = scheme_from_string(j.at("scheme").get<std::string>());
        for (const auto& node : j.at("nodes")) {
            GraphNode gn;
            const auto& control = node.at("control");
            if (control.size() != 4) throw DataError("graph node must have 4 control points");
            for (int i = 0; i < 4; ++i)
                gn.bezier.control[std::size_t(i)] = {control[std::size_t(i)][0].get<double>(),
                                                     control[std::size_t(i)][1].get<double>()};
            gn.features = node.at("features").get<std::vector<double>>();
            if (int(gn.features.size()) != 5 * g.n - 1)
                throw DataError("graph feature length mismatch in " + path);
            g.nodes.push_back(std::move(gn));
        }
        if (g.nodes.empty()) throw DataError("empty graph: " + path);
        for (const auto& e : j.at("edges")) {
            int a = e[0].get<int>(), b = e[1].get<int>();
            if (a < 0 || b < 0 || a >= g.num_nodes() || b >= g.num_nodes())
                throw DataError("edge index out of range in " + path);
            if (a == b) throw DataError("self-edge in " + path);
            g.edges.push_back({std::min(a, b), std::max(a, b)});
        }
        std::sort(g.edges.begin(), g.edges.end());
        g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
        if (j.contains("labels")) {
            g.labels = j["labels"].get<std::vector<int>>();
            if (int(g.labels.size()) != g.num_nodes())
                throw DataError("label count mismatch in " + path);
            for (int l : g.labels)
                if (l < 0 || l >= g.scheme.num_classes())
                    throw DataError("label out of range in " + path);
        }
        if (j.contains("provenance")) g.provenance = j["provenance"];
        return g;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("malformed graph file " + path + ": " + e.what());
    }
}

std::string graph_to_svg(const ComponentGraph& g, const std::vector<int>* label_override) {
    const std::vector<int>* labels = label_override ? label_override
                                     : g.has_labels() ? &g.labels
                                                      : nullptr;
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"-0.02 -0.02 1.04 1.04\">\n";
    out << "  <rect x=\"-0.02\" y=\"-0.02\" width=\"1.04\" height=\"1.04\" fill=\"white\"/>\n";
    char buf[256];
    for (int i = 0; i < g.num_nodes(); ++i) {
        const auto& c = g.nodes[std::size_t(i)].bezier.control;
        Rgb color = kBlack;
        if (labels) color = g.scheme.class_color((*labels)[std::size_t(i)]);
        std::snprintf(buf, sizeof buf,
                      "  <path d=\"M %.6f %.6f C %.6f %.6f, %.6f %.6f, %.6f %.6f\" "
                      "stroke=\"rgb(%d,%d,%d)\" stroke-width=\"0.004\" fill=\"none\"/>\n",
                      c[0].x, c[0].y, c[1].x, c[1].y, c[2].x, c[2].y, c[3].x, c[3].y, int(color.r),
                      int(color.g), int(color.b));
        out << buf;
    }
    out << "</svg>\n";
    return out.str();
}

} // namespace drawgraph
