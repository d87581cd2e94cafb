#include "drawgraph/pipeline.hpp"

#include "drawgraph/errors.hpp"

namespace drawgraph {

VectorizeResult vectorize_drawing(const GrayRaster& drawing, const PipelineConfig& cfg,
                                  const ColorRaster* ground_truth) {
    if (ground_truth &&
        (ground_truth->width != drawing.width || ground_truth->height != drawing.height))
        throw DataError("ground truth dimensions do not match the drawing");

    VectorizeResult res;
    BinaryRaster mask = binarize(drawing, cfg.threshold);
    res.skeleton = remove_spurs(skeletonize(mask, cfg.skeleton_method), cfg.max_spur_len);

    std::vector<Trace> split;
    for (const Trace& t : extract_traces(res.skeleton)) {
        auto parts = split_at_corners(t, cfg.spike_threshold);
        split.insert(split.end(), parts.begin(), parts.end());
    }

    PrunedTraces pruned = prune_and_merge(split, cfg.merge_radius);
    res.traces = std::move(pruned.traces);
    res.vertices = std::move(pruned.vertices);

    res.pixel_curves.reserve(res.traces.size());
    for (int i = 0; i < int(res.traces.size()); ++i) {
        CubicBezier c = fit_cubic_bezier(res.traces[std::size_t(i)]);
        c.source_trace = i;
        c.vertex_ids = pruned.trace_vertices[std::size_t(i)];
        res.pixel_curves.push_back(c);
    }
    if (res.pixel_curves.empty()) throw DataError("degenerate drawing: no components survived");

    std::vector<CubicBezier> normalized = normalize_components(res.pixel_curves, res.normalization);
    res.graph = build_graph(normalized, res.vertices, cfg.n);
    res.graph.scheme = cfg.scheme;
    res.graph.provenance["params"] = {{"threshold", cfg.threshold},
                                      {"spike_threshold", cfg.spike_threshold},
                                      {"merge_radius", cfg.merge_radius},
                                      {"max_spur_len", cfg.max_spur_len},
                                      {"n", cfg.n},
                                      {"skeleton_method", cfg.skeleton_method}};

    if (ground_truth)
        label_from_ground_truth(res.graph, *ground_truth, cfg.scheme, res.normalization.inverse());
    return res;
}

int remap_label(int three_class_label, const std::string& task) {
    if (task == "three-class") return three_class_label;
    if (task == "text-nontext") return three_class_label == 1 ? 0 : 1;
    if (task == "contour-noncontour") return three_class_label == 0 ? 0 : 1;
    throw DataError("unknown task: " + task);
}

ComponentGraph remap_to_task(const ComponentGraph& g, const std::string& task) {
    if (g.scheme.kind != ClassScheme::TextContourDimension)
        throw DataError("task remapping needs three-class labels");
    ComponentGraph out = g;
    if (task == "three-class") return out;
    if (task == "contour-noncontour")
        throw DataError("contour-noncontour is an eval-only remap (no label scheme)");
    out.scheme = LabelScheme::two_class();
    for (int& l : out.labels) l = remap_label(l, task);
    return out;
}

std::vector<std::string> task_class_names(const std::string& task) {
    if (task == "three-class") return {"contour", "text", "dimension"};
    if (task == "text-nontext") return {"text", "non-text"};
    if (task == "contour-noncontour") return {"contour", "non-contour"};
    throw DataError("unknown task: " + task);
}

} // namespace drawgraph
