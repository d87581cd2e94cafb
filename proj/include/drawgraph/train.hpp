#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "drawgraph/model.hpp"

namespace drawgraph {

struct TrainConfig {
    double learning_rate = 1e-3;
    double weight_decay = 5e-4; // coupled L2 on weights, biases exempt
    int max_epochs = 2000;      // 10000 mirrors the full-scale recipe
    int batch_size = 16;        // graphs per step, merged as a disjoint union
    double split = 0.8;         // train fraction of the drawing-level split
    std::uint64_t seed = 0;
};

struct EpochStats {
    double train_loss = 0.0;
    double val_accuracy = 0.0;
    bool operator==(const EpochStats&) const = default;
};

struct TrainResult {
    ModelParams best; // checkpoint with the best validation accuracy
    std::vector<EpochStats> history;
    double best_val_accuracy = 0.0;
    int best_epoch = -1;
    int num_train = 0;
    int num_val = 0;
};

// Several graphs stacked block-diagonally for one training step.
struct UnionBatch {
    GraphTopo topo;
    DenseMatrix features;
    std::vector<int> labels;
};

UnionBatch union_batch(const std::vector<const ComponentGraph*>& graphs);

// One Adam update with coupled weight decay (beta1=0.9, beta2=0.999,
// eps=1e-8, bias correction). Biases are excluded from decay.
void adam_step(ModelParams& params, const std::vector<LayerGrads>& grads, const TrainConfig& tc);

// Fraction of correctly labeled nodes across all graphs.
double node_accuracy(const ModelParams& params, const std::vector<const ComponentGraph*>& graphs);

// Seeded shuffle + drawing-level split, then the epoch loop. All graphs must
// share n and scheme; both sides of the split must be non-empty.
TrainResult train(const std::vector<ComponentGraph>& dataset, const ModelConfig& mc,
                  const TrainConfig& tc);

// Same loop with an explicit split (the two sets may overlap, e.g. for
// overfit checks).
TrainResult train_with_split(const std::vector<const ComponentGraph*>& train_set,
                             const std::vector<const ComponentGraph*>& val_set,
                             const ModelConfig& mc, const TrainConfig& tc);

void save_history(const std::vector<EpochStats>& history, const std::string& path);

} // namespace drawgraph
