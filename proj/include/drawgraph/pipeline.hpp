#pragma once

#include <optional>
#include <string>
#include <vector>

#include "drawgraph/graph.hpp"
#include "drawgraph/raster.hpp"
#include "drawgraph/skeleton.hpp"
#include "drawgraph/trace.hpp"

namespace drawgraph {

struct PipelineConfig {
    int threshold = 128;           // binarization, dark-on-light
    double spike_threshold = 0.15; // corner split, radians
    double merge_radius = 2.0;    // terminal merge, px
    int max_spur_len = 3;         // spur pruning, px
    int n = 4;                    // samples per component
    std::string skeleton_method = "zhang-suen";
    LabelScheme scheme = LabelScheme::three_class();
};

struct VectorizeResult {
    ComponentGraph graph;              // normalized curves + features (+labels)
    std::vector<CubicBezier> pixel_curves; // pre-normalization, parallel to nodes
    std::vector<Trace> traces;         // post split/prune, parallel to nodes
    VertexSet vertices;
    Normalization normalization;
    BinaryRaster skeleton;             // thinned + de-spurred mask
};

// binarize -> skeletonize -> remove_spurs -> extract -> split -> prune/merge
// -> fit -> normalize -> featurize -> build_graph -> (label from gt).
VectorizeResult vectorize_drawing(const GrayRaster& drawing, const PipelineConfig& cfg,
                                  const ColorRaster* ground_truth = nullptr);

// Deterministic label remap for the segmentation tasks: "three-class",
// "text-nontext", "contour-noncontour" (eval-only for the latter).
int remap_label(int three_class_label, const std::string& task);
ComponentGraph remap_to_task(const ComponentGraph& g, const std::string& task);
std::vector<std::string> task_class_names(const std::string& task);

} // namespace drawgraph
