#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "drawgraph/errors.hpp"
#include "drawgraph/jsonio.hpp"
#include "drawgraph/metrics.hpp"
#include "drawgraph/pipeline.hpp"
#include "drawgraph/synth.hpp"
#include "drawgraph/train.hpp"

namespace fs = std::filesystem;
using namespace drawgraph;

namespace {

struct PipelineFlags {
    PipelineConfig cfg;
    std::string scheme = "text-contour-dimension";

    void attach(CLI::App* cmd) {
        cmd->add_option("--threshold", cfg.threshold, "Binarization threshold (ink < threshold)")
            ->capture_default_str();
        cmd->add_option("--spike-threshold", cfg.spike_threshold,
                        "Corner split threshold (radians)")
            ->capture_default_str();
        cmd->add_option("--merge-radius", cfg.merge_radius, "Terminal merge radius (px)")
            ->capture_default_str();
        cmd->add_option("--max-spur-len", cfg.max_spur_len, "Max spur length to prune (px)")
            ->capture_default_str();
        cmd->add_option("--samples", cfg.n, "Sample points per component (n >= 4)")
            ->capture_default_str();
        cmd->add_option("--skeleton-method", cfg.skeleton_method, "Thinning algorithm")
            ->capture_default_str();
        cmd->add_option("--scheme", scheme,
                        "Label scheme: text-contour-dimension | text-nontext")
            ->capture_default_str();
    }

    PipelineConfig resolved() const {
        PipelineConfig c = cfg;
        c.scheme = LabelScheme{scheme_from_string(scheme)};
        return c;
    }
};

std::vector<std::string> graph_files_in(const std::string& path) {
    std::vector<std::string> files;
    if (fs::is_directory(path)) {
        for (const auto& e : fs::directory_iterator(path)) {
            if (e.path().extension() == ".json" &&
                e.path().filename().string().find("graph") != std::string::npos)
                files.push_back(e.path().string());
        }
        std::sort(files.begin(), files.end());
    } else {
        files.push_back(path);
    }
    if (files.empty()) throw IoError("no graph files found under " + path);
    return files;
}

void run_vectorize_one(const std::string& drawing_path, const std::string& gt_path,
                       const PipelineConfig& cfg, const std::string& out,
                       const std::string& traces_out, const std::string& svg_out) {
    GrayRaster drawing = load_gray(drawing_path);
    ColorRaster gt;
    bool with_gt = !gt_path.empty();
    if (with_gt) gt = load_color(gt_path);

    VectorizeResult res = vectorize_drawing(drawing, cfg, with_gt ? &gt : nullptr);
    res.graph.provenance["source"] = drawing_path;
    if (with_gt) res.graph.provenance["ground_truth"] = gt_path;
    save_graph(res.graph, out);
    if (!traces_out.empty()) write_text_atomic(traces_to_json(res.traces), traces_out);
    if (!svg_out.empty()) write_text_atomic(graph_to_svg(res.graph), svg_out);
}

int cmd_synth(int count, std::uint64_t seed, const std::string& out_dir, int canvas,
              double stroke) {
    auto entries = generate_corpus(count, seed, out_dir, canvas, stroke);
    std::cout << "wrote " << entries.size() << " drawing/gt pairs to " << out_dir << "\n";
    return 0;
}

int cmd_train(const std::string& graphs_path, const std::string& preset, const std::string& task,
              const TrainConfig& tc, const std::string& model_out,
              const std::string& history_out) {
    std::vector<ComponentGraph> dataset;
    for (const std::string& f : graph_files_in(graphs_path)) {
        ComponentGraph g = load_graph(f);
        if (!g.has_labels()) throw DataError("training graph has no labels: " + f);
        if (task != "three-class" || g.scheme.kind != ClassScheme::TextContourDimension)
            g = remap_to_task(g, task);
        dataset.push_back(std::move(g));
    }
    if (dataset.empty()) throw DataError("no graphs to train on");

    ModelConfig mc = ModelConfig::preset(preset, dataset.front().feature_dim(),
                                         dataset.front().scheme.num_classes());
    TrainResult result = train(dataset, mc, tc);
    save_model(result.best, model_out);
    if (!history_out.empty()) save_history(result.history, history_out);
    std::cout << "best validation accuracy " << result.best_val_accuracy * 100.0 << "% at epoch "
              << result.best_epoch << "\n";
    return 0;
}

int cmd_predict(const std::string& graph_path, const std::string& model_path,
                const std::string& labels_out, const std::string& svg_out) {
    ComponentGraph g = load_graph(graph_path);
    ModelParams params = load_model(model_path);
    std::vector<int> pred = predict(g, params);

    nlohmann::json j;
    j["version"] = 1;
    j["scheme"] = to_string(g.scheme.kind);
    j["labels"] = pred;
    write_json_atomic(j, labels_out);
    if (!svg_out.empty()) write_text_atomic(graph_to_svg(g, &pred), svg_out);
    return 0;
}

std::vector<int> load_labels_file(const std::string& path, int expected_count) {
    nlohmann::json j = read_json(path);
    std::vector<int> labels;
    try {
        labels = j.at("labels").get<std::vector<int>>();
    } catch (const nlohmann::json::exception& e) {
        throw DataError("malformed labels file " + path + ": " + e.what());
    }
    if (expected_count >= 0 && int(labels.size()) != expected_count)
        throw DataError("label count mismatch in " + path);
    return labels;
}

int cmd_eval(const std::string& confusion_path, const std::string& graphs_path,
             const std::string& pred_path, const std::string& task,
             const std::string& report_out) {
    MetricsReport report{ConfusionMatrix{0}, {}, 0.0};
    std::vector<std::string> names;

    if (!confusion_path.empty()) {
        nlohmann::json j = read_json(confusion_path);
        const auto& rows = j.is_object() ? j.at("confusion") : j;
        int c = int(rows.size());
        ConfusionMatrix cm(c);
        for (int i = 0; i < c; ++i) {
            if (int(rows[std::size_t(i)].size()) != c)
                throw DataError("confusion matrix must be square");
            for (int k = 0; k < c; ++k) cm.add(i, k, rows[std::size_t(i)][std::size_t(k)].get<long>());
        }
        report = compute_metrics(cm);
        for (int i = 0; i < c; ++i) names.push_back("class" + std::to_string(i));
    } else {
        auto gt_files = graph_files_in(graphs_path);
        std::vector<std::string> pred_files;
        if (fs::is_directory(pred_path)) {
            for (const std::string& g : gt_files) {
                fs::path p = fs::path(pred_path) / fs::path(g).filename().stem();
                pred_files.push_back(p.string() + ".labels.json");
            }
        } else {
            pred_files.push_back(pred_path);
        }
        if (gt_files.size() != pred_files.size())
            throw DataError("ground truth / prediction count mismatch");

        names = task_class_names(task);
        ConfusionMatrix cm(int(names.size()));
        for (std::size_t i = 0; i < gt_files.size(); ++i) {
            ComponentGraph g = load_graph(gt_files[i]);
            if (!g.has_labels()) throw DataError("graph has no labels: " + gt_files[i]);
            if (g.scheme.kind != ClassScheme::TextContourDimension && task != "text-nontext")
                throw DataError("task remap needs three-class ground truth");
            std::vector<int> pred = load_labels_file(pred_files[i], g.num_nodes());
            bool remap = g.scheme.kind == ClassScheme::TextContourDimension;
            for (int k = 0; k < g.num_nodes(); ++k) {
                int gt_label = g.labels[std::size_t(k)];
                int pr_label = pred[std::size_t(k)];
                if (remap) {
                    gt_label = remap_label(gt_label, task);
                    pr_label = remap_label(pr_label, task);
                }
                cm.add(gt_label, pr_label);
            }
        }
        report = compute_metrics(cm);
    }

    std::cout << metrics_to_text(report, names);
    if (!report_out.empty()) write_json_atomic(metrics_to_json(report, names), report_out);
    return 0;
}

int cmd_render(const std::string& graph_path, const std::string& labels_path,
               const std::string& svg_out) {
    ComponentGraph g = load_graph(graph_path);
    if (!labels_path.empty()) {
        std::vector<int> labels = load_labels_file(labels_path, g.num_nodes());
        write_text_atomic(graph_to_svg(g, &labels), svg_out);
    } else {
        write_text_atomic(graph_to_svg(g), svg_out);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Raster drawing vectorization and component classification"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Config file (key=value), flags take precedence");

    // synth
    auto* synth = app.add_subcommand("synth", "Generate a synthetic drawing corpus");
    int synth_count = 10;
    std::uint64_t synth_seed = 1;
    std::string synth_out = "corpus";
    int synth_canvas = 1024;
    double synth_stroke = 3.0;
    synth->add_option("--count", synth_count, "Number of drawings")->capture_default_str();
    synth->add_option("--seed", synth_seed, "Base seed")->capture_default_str();
    synth->add_option("--out", synth_out, "Output directory")->capture_default_str();
    synth->add_option("--canvas", synth_canvas, "Canvas long side (px)")->capture_default_str();
    synth->add_option("--stroke", synth_stroke, "Stroke width (px)")->capture_default_str();

    // vectorize
    auto* vec = app.add_subcommand("vectorize", "Vectorize drawings into component graphs");
    std::string vec_drawing, vec_gt, vec_out = "out.graph.json";
    std::string vec_index, vec_out_dir = "graphs";
    std::string vec_traces, vec_svg;
    PipelineFlags vec_flags;
    vec->add_option("drawing", vec_drawing, "Drawing image (PNG/PGM/PPM)");
    vec->add_option("--gt", vec_gt, "Ground-truth color render for labeling");
    vec->add_option("-o,--out", vec_out, "Output graph file")->capture_default_str();
    vec->add_option("--index", vec_index, "Corpus index.json for batch vectorization");
    vec->add_option("--out-dir", vec_out_dir, "Batch output directory")->capture_default_str();
    vec->add_option("--dump-traces", vec_traces, "Write trace debug JSON");
    vec->add_option("--svg", vec_svg, "Write an SVG preview");
    vec_flags.attach(vec);

    // train
    auto* train_cmd = app.add_subcommand("train", "Train a classifier on labeled graphs");
    std::string train_graphs, train_preset = "gs3", train_task = "three-class";
    std::string train_model_out = "model.json", train_history_out;
    TrainConfig tc;
    train_cmd->add_option("--graphs", train_graphs, "Graph directory or file")->required();
    train_cmd->add_option("--preset", train_preset, "Model preset: gs3|gs4|gs5|gcn|mlp")
        ->capture_default_str();
    train_cmd->add_option("--task", train_task, "three-class | text-nontext")
        ->capture_default_str();
    train_cmd->add_option("--lr", tc.learning_rate, "Learning rate")->capture_default_str();
    train_cmd->add_option("--weight-decay", tc.weight_decay, "Coupled L2 weight decay")
        ->capture_default_str();
    train_cmd->add_option("--epochs", tc.max_epochs, "Training epochs")->capture_default_str();
    train_cmd->add_option("--batch-size", tc.batch_size, "Graphs per step")
        ->capture_default_str();
    train_cmd->add_option("--split", tc.split, "Train fraction of the split")
        ->capture_default_str();
    train_cmd->add_option("--seed", tc.seed, "Seed (init, shuffles)")->capture_default_str();
    train_cmd->add_option("-o,--out", train_model_out, "Model output file")
        ->capture_default_str();
    train_cmd->add_option("--history", train_history_out, "Write per-epoch history JSON");

    // predict
    auto* pred = app.add_subcommand("predict", "Predict component classes for a graph");
    std::string pred_graph, pred_model, pred_out = "labels.json", pred_svg;
    pred->add_option("graph", pred_graph, "Graph file")->required();
    pred->add_option("model", pred_model, "Model file")->required();
    pred->add_option("-o,--out", pred_out, "Labels output file")->capture_default_str();
    pred->add_option("--svg", pred_svg, "Write a colored SVG overlay");

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "Compute metrics for predictions");
    std::string eval_confusion, eval_graphs, eval_pred, eval_task = "three-class";
    std::string eval_out;
    eval_cmd->add_option("--confusion", eval_confusion,
                         "Confusion-matrix JSON (rows = ground truth)");
    eval_cmd->add_option("--graphs", eval_graphs, "Labeled graph dir/file");
    eval_cmd->add_option("--pred", eval_pred, "Prediction labels dir/file");
    eval_cmd->add_option("--task", eval_task,
                         "three-class | text-nontext | contour-noncontour")
        ->capture_default_str();
    eval_cmd->add_option("-o,--out", eval_out, "Metrics report JSON");

    // render
    auto* render = app.add_subcommand("render", "Render a graph to SVG");
    std::string render_graph, render_labels, render_out = "out.svg";
    render->add_option("graph", render_graph, "Graph file")->required();
    render->add_option("--labels", render_labels, "Labels file to color by");
    render->add_option("-o,--out", render_out, "SVG output")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (synth->parsed())
            return cmd_synth(synth_count, synth_seed, synth_out, synth_canvas, synth_stroke);
        if (vec->parsed()) {
            PipelineConfig cfg = vec_flags.resolved();
            if (!vec_index.empty()) {
                fs::path base = fs::path(vec_index).parent_path();
                fs::create_directories(vec_out_dir);
                auto entries = load_corpus_index(vec_index);
                for (std::size_t i = 0; i < entries.size(); ++i) {
                    char name[32];
                    std::snprintf(name, sizeof name, "%04zu", i);
                    run_vectorize_one((base / entries[i].draw_file).string(),
                                      (base / entries[i].gt_file).string(), cfg,
                                      (fs::path(vec_out_dir) / (std::string(name) + ".graph.json"))
                                          .string(),
                                      "", "");
                }
                std::cout << "vectorized " << entries.size() << " drawings into " << vec_out_dir
                          << "\n";
                return 0;
            }
            if (vec_drawing.empty()) throw CLI::ValidationError("vectorize", "missing drawing");
            run_vectorize_one(vec_drawing, vec_gt, cfg, vec_out, vec_traces, vec_svg);
            return 0;
        }
        if (train_cmd->parsed())
            return cmd_train(train_graphs, train_preset, train_task, tc, train_model_out,
                             train_history_out);
        if (pred->parsed()) return cmd_predict(pred_graph, pred_model, pred_out, pred_svg);
        if (eval_cmd->parsed())
            return cmd_eval(eval_confusion, eval_graphs, eval_pred, eval_task, eval_out);
        if (render->parsed()) return cmd_render(render_graph, render_labels, render_out);
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
