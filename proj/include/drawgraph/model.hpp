#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "drawgraph/densemat.hpp"
#include "drawgraph/graph.hpp"

namespace drawgraph {

enum class ModelKind { GS, GCN, MLP };
enum class LayerType { SageConv, GcnConv, Linear };

std::string to_string(ModelKind k);
ModelKind model_kind_from_string(const std::string& s);

struct LayerSpec {
    LayerType type;
    int in = 0;
    int out = 0;
    bool relu = true;
};

// Architecture descriptor. Conv layers expand the width, linear layers
// squeeze it down to the class count; every layer but the last applies ReLU.
struct ModelConfig {
    ModelKind kind = ModelKind::GS;
    std::vector<int> conv_widths;
    std::vector<int> linear_widths; // last entry = num_classes
    int in_dim = 19;
    int num_classes = 3;

    std::vector<LayerSpec> layers() const;
    void validate() const;

    // Presets: gs3, gs4, gs5, gcn, mlp.
    static ModelConfig preset(const std::string& name, int in_dim, int num_classes);
};

// A trainable tensor together with its Adam moment buffers.
struct Tensor {
    DenseMatrix value;
    DenseMatrix adam_m;
    DenseMatrix adam_v;

    explicit Tensor(int rows = 0, int cols = 0)
        : value(rows, cols), adam_m(rows, cols), adam_v(rows, cols) {}
};

struct LayerParams {
    LayerType type = LayerType::Linear;
    Tensor w_self;  // weight for Linear / GCN; self weight for SAGE
    Tensor w_neigh; // SAGE only (empty otherwise)
    Tensor bias;    // 1 x out
};

struct ModelParams {
    ModelConfig config;
    std::vector<LayerParams> layers;
    long step = 0; // Adam step counter
    double best_val_accuracy = 0.0;
};

// Glorot-uniform weights from a seeded stream; zero biases and moments.
ModelParams init_params(const ModelConfig& config, std::uint64_t seed);

// Undirected adjacency lists (no self loops, no duplicates).
struct GraphTopo {
    int num_nodes = 0;
    std::vector<std::vector<int>> neighbors;

    static GraphTopo from_edges(int num_nodes, const std::vector<std::pair<int, int>>& edges);
};

// Mean of neighbor rows; zero row for isolated nodes.
DenseMatrix neighbor_mean(const DenseMatrix& h, const GraphTopo& topo);

// Symmetric-normalized propagation with self loops: D^-1/2 (A+I) D^-1/2 H.
DenseMatrix gcn_propagate(const DenseMatrix& h, const GraphTopo& topo);

DenseMatrix sage_conv_forward(const DenseMatrix& h, const GraphTopo& topo,
                              const DenseMatrix& w_self, const DenseMatrix& w_neigh,
                              const DenseMatrix& bias);
DenseMatrix gcn_conv_forward(const DenseMatrix& h, const GraphTopo& topo, const DenseMatrix& w,
                             const DenseMatrix& bias);
DenseMatrix linear_forward(const DenseMatrix& h, const DenseMatrix& w, const DenseMatrix& bias,
                           bool relu);

struct LayerCache {
    DenseMatrix input; // layer input H
    DenseMatrix agg;   // neighbor mean (SAGE) or propagated input (GCN)
    DenseMatrix pre;   // pre-activation
};

// Full forward pass to logits; pass caches to retain what backward needs.
DenseMatrix model_forward(const ModelParams& params, const GraphTopo& topo, const DenseMatrix& x,
                          std::vector<LayerCache>* caches = nullptr);

struct LossResult {
    double loss = 0.0;
    DenseMatrix dlogits;
};

// Mean per-node cross entropy with a numerically stabilized softmax;
// dlogits = (softmax - onehot) / rows.
LossResult softmax_cross_entropy(const DenseMatrix& logits, const std::vector<int>& labels);

struct LayerGrads {
    DenseMatrix w_self;
    DenseMatrix w_neigh;
    DenseMatrix bias;
};

std::vector<LayerGrads> model_backward(const ModelParams& params, const GraphTopo& topo,
                                       const std::vector<LayerCache>& caches,
                                       const DenseMatrix& dlogits);

// Node features stacked into a matrix.
DenseMatrix features_matrix(const ComponentGraph& g);

// Throws "class count mismatch" / dimension errors when the model cannot
// consume the graph.
void ensure_compatible(const ModelParams& params, const ComponentGraph& g);

// Argmax class per node, ties toward the lowest index.
std::vector<int> predict(const ComponentGraph& g, const ModelParams& params);
std::vector<int> argmax_rows(const DenseMatrix& logits);

void save_model(const ModelParams& params, const std::string& path);
ModelParams load_model(const std::string& path);

} // namespace drawgraph
