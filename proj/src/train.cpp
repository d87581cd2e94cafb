#include "drawgraph/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "drawgraph/errors.hpp"
#include "drawgraph/jsonio.hpp"
#include "drawgraph/rng.hpp"

namespace drawgraph {

UnionBatch union_batch(const std::vector<const ComponentGraph*>& graphs) {
    UnionBatch b;
    int total = 0;
    for (const ComponentGraph* g : graphs) total += g->num_nodes();
    b.features = DenseMatrix(total, graphs.empty() ? 0 : graphs.front()->feature_dim());
    b.topo.num_nodes = total;
    b.topo.neighbors.assign(std::size_t(total), {});
    b.labels.reserve(std::size_t(total));

    int offset = 0;
    for (const ComponentGraph* g : graphs) {
        for (int i = 0; i < g->num_nodes(); ++i) {
            const auto& f = g->nodes[std::size_t(i)].features;
            std::copy(f.begin(), f.end(), b.features.row(offset + i));
        }
        for (auto [u, v] : g->edges) {
            b.topo.neighbors[std::size_t(offset + u)].push_back(offset + v);
            b.topo.neighbors[std::size_t(offset + v)].push_back(offset + u);
        }
        if (g->has_labels())
            b.labels.insert(b.labels.end(), g->labels.begin(), g->labels.end());
        offset += g->num_nodes();
    }
    for (auto& nb : b.topo.neighbors) {
        std::sort(nb.begin(), nb.end());
        nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    }
    return b;
}

namespace {

void adam_update_tensor(Tensor& t, const DenseMatrix& grad, const TrainConfig& tc, long step,
                        bool decay) {
    constexpr double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
    double bc1 = 1.0 - std::pow(beta1, double(step));
    double bc2 = 1.0 - std::pow(beta2, double(step));
    for (std::size_t i = 0; i < t.value.values.size(); ++i) {
        double g = grad.values[i];
        if (decay) g += tc.weight_decay * t.value.values[i];
        double m = t.adam_m.values[i] = beta1 * t.adam_m.values[i] + (1 - beta1) * g;
        double v = t.adam_v.values[i] = beta2 * t.adam_v.values[i] + (1 - beta2) * g * g;
        t.value.values[i] -= tc.learning_rate * (m / bc1) / (std::sqrt(v / bc2) + eps);
    }
}

} // namespace

void adam_step(ModelParams& params, const std::vector<LayerGrads>& grads, const TrainConfig& tc) {
    if (grads.size() != params.layers.size()) throw DataError("gradient/parameter mismatch");
    ++params.step;
    for (std::size_t i = 0; i < params.layers.size(); ++i) {
        LayerParams& lp = params.layers[i];
        adam_update_tensor(lp.w_self, grads[i].w_self, tc, params.step, true);
        if (lp.type == LayerType::SageConv)
            adam_update_tensor(lp.w_neigh, grads[i].w_neigh, tc, params.step, true);
        adam_update_tensor(lp.bias, grads[i].bias, tc, params.step, false);
    }
}

double node_accuracy(const ModelParams& params, const std::vector<const ComponentGraph*>& graphs) {
    long correct = 0, total = 0;
    for (const ComponentGraph* g : graphs) {
        if (!g->has_labels()) throw DataError("accuracy needs labeled graphs");
        std::vector<int> pred = predict(*g, params);
        for (int i = 0; i < g->num_nodes(); ++i) {
            correct += pred[std::size_t(i)] == g->labels[std::size_t(i)] ? 1 : 0;
            ++total;
        }
    }
    return total == 0 ? 0.0 : double(correct) / double(total);
}

TrainResult train_with_split(const std::vector<const ComponentGraph*>& train_set,
                             const std::vector<const ComponentGraph*>& val_set,
                             const ModelConfig& mc, const TrainConfig& tc) {
    if (train_set.empty() || val_set.empty())
        throw DataError("train needs at least one graph on each side of the split");
    for (const ComponentGraph* g : train_set) {
        if (!g->has_labels()) throw DataError("training graphs must be labeled");
        if (g->n != train_set.front()->n || g->scheme.kind != train_set.front()->scheme.kind)
            throw DataError("training graphs must share n and scheme");
    }
    mc.validate();
    if (mc.in_dim != train_set.front()->feature_dim())
        throw DataError("model in_dim does not match graph features");
    if (mc.num_classes != train_set.front()->scheme.num_classes())
        throw DataError("class count mismatch between model and graphs");

    ModelParams params = init_params(mc, tc.seed);
    Rng epoch_rng(tc.seed ^ 0x9e3779b97f4a7c15ULL);

    TrainResult result;
    result.best = params;
    result.num_train = int(train_set.size());
    result.num_val = int(val_set.size());
    std::vector<int> order(train_set.size());
    std::iota(order.begin(), order.end(), 0);

    for (int epoch = 0; epoch < tc.max_epochs; ++epoch) {
        epoch_rng.shuffle(order);
        double loss_sum = 0.0;
        long loss_nodes = 0;
        for (std::size_t start = 0; start < order.size(); start += std::size_t(tc.batch_size)) {
            std::vector<const ComponentGraph*> batch_graphs;
            for (std::size_t k = start; k < order.size() && k < start + std::size_t(tc.batch_size); ++k)
                batch_graphs.push_back(train_set[std::size_t(order[k])]);
            UnionBatch batch = union_batch(batch_graphs);

            std::vector<LayerCache> caches;
            DenseMatrix logits = model_forward(params, batch.topo, batch.features, &caches);
            LossResult lr = softmax_cross_entropy(logits, batch.labels);
            auto grads = model_backward(params, batch.topo, caches, lr.dlogits);
            adam_step(params, grads, tc);

            loss_sum += lr.loss * double(batch.topo.num_nodes);
            loss_nodes += batch.topo.num_nodes;
        }
        double val_acc = node_accuracy(params, val_set);
        result.history.push_back({loss_sum / double(loss_nodes), val_acc});
        if (result.best_epoch < 0 || val_acc > result.best_val_accuracy) {
            result.best_val_accuracy = val_acc;
            result.best_epoch = epoch;
            result.best = params;
            result.best.best_val_accuracy = val_acc;
        }
    }
    return result;
}

TrainResult train(const std::vector<ComponentGraph>& dataset, const ModelConfig& mc,
                  const TrainConfig& tc) {
    if (dataset.size() < 2) throw DataError("train needs at least 2 graphs");
    if (tc.split <= 0.0 || tc.split >= 1.0) throw DataError("split must be in (0,1)");

    std::vector<int> order(dataset.size());
    std::iota(order.begin(), order.end(), 0);
    Rng rng(tc.seed);
    rng.shuffle(order);

    int n_train = int(std::llround(tc.split * double(dataset.size())));
    n_train = std::clamp(n_train, 1, int(dataset.size()) - 1);

    std::vector<const ComponentGraph*> train_set, val_set;
    for (int i = 0; i < int(dataset.size()); ++i) {
        const ComponentGraph* g = &dataset[std::size_t(order[std::size_t(i)])];
        (i < n_train ? train_set : val_set).push_back(g);
    }
    return train_with_split(train_set, val_set, mc, tc);
}

void save_history(const std::vector<EpochStats>& history, const std::string& path) {
    nlohmann::json j = nlohmann::json::array();
    for (const EpochStats& e : history)
        j.push_back({{"train_loss", e.train_loss}, {"val_accuracy", e.val_accuracy}});
    write_json_atomic(j, path);
}

} // namespace drawgraph
