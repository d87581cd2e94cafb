#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "drawgraph/bezier.hpp"
#include "drawgraph/raster.hpp"
#include "drawgraph/trace.hpp"

namespace drawgraph {

enum class ClassScheme { TextNontext, TextContourDimension };

// Class names and the ground-truth palette. Class order doubles as the
// tie-break order for majority votes and argmax.
struct LabelScheme {
    ClassScheme kind = ClassScheme::TextContourDimension;

    int num_classes() const;
    std::string class_name(int cls) const;
    Rgb class_color(int cls) const;

    // Map a ground-truth pixel color: exact/near palette colors snap to their
    // class by squared RGB distance; unknown saturated colors count as
    // "other colored lines"; std::nullopt means background.
    std::optional<int> classify_color(Rgb c) const;

    static LabelScheme two_class() { return {ClassScheme::TextNontext}; }
    static LabelScheme three_class() { return {ClassScheme::TextContourDimension}; }
};

std::string to_string(ClassScheme s);
ClassScheme scheme_from_string(const std::string& s);

struct GraphNode {
    CubicBezier bezier;
    std::vector<double> features; // length 5n-1
};

// Component graph: one node per fitted curve, undirected edges between
// co-terminal components.
struct ComponentGraph {
    std::vector<GraphNode> nodes;
    std::vector<std::pair<int, int>> edges; // i < j, sorted, unique
    std::vector<int> labels;                // empty or one class index per node
    int n = 4;                              // samples per component
    LabelScheme scheme;
    nlohmann::json provenance = nlohmann::json::object();

    bool has_labels() const { return !labels.empty(); }
    int num_nodes() const { return int(nodes.size()); }
    int feature_dim() const { return 5 * n - 1; }
};

// Uniform scale + translation; maps normalized coordinates back to raster
// space (the inverse of the normalization transform).
struct Similarity {
    double scale = 1.0;
    Vec2 offset{0.0, 0.0};
    Vec2 apply(Vec2 p) const { return p * scale + offset; }
};

// Transform that normalize_components applies, plus its inverse.
struct Normalization {
    double scale = 1.0; // 1 / max bbox extent
    Vec2 bbox_min{0.0, 0.0};
    Vec2 apply(Vec2 p) const { return (p - bbox_min) * scale; }
    Similarity inverse() const { return {1.0 / scale, bbox_min}; }
};

Normalization compute_normalization(const std::vector<CubicBezier>& curves);
std::vector<CubicBezier> normalize_components(const std::vector<CubicBezier>& curves);
std::vector<CubicBezier> normalize_components(const std::vector<CubicBezier>& curves,
                                              Normalization& used);

// Table-of-features for one normalized component, pinned order:
// 2n sample coordinates, n-1 consecutive-pair lengths, total length,
// chord/total ratio, n-2 cosine angles, n curvatures. Length 5n-1.
std::vector<double> featurize(const CubicBezier& c, int n);

ComponentGraph build_graph(const std::vector<CubicBezier>& curves, const VertexSet& vertices,
                           int n);

// Majority vote over the colors under each node's sample points. Background
// reads search a 3 px window before abstaining; a node with no votes at all
// is an error (misaligned ground truth).
void label_from_ground_truth(ComponentGraph& g, const ColorRaster& gt, const LabelScheme& scheme,
                             const Similarity& pixel_transform);

void save_graph(const ComponentGraph& g, const std::string& path);
ComponentGraph load_graph(const std::string& path);

// One path per node, stroke colored by label (or override) via the scheme
// palette; unlabeled nodes render black.
std::string graph_to_svg(const ComponentGraph& g, const std::vector<int>* label_override = nullptr);

} // namespace drawgraph
