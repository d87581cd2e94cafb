#include "drawgraph/model.hpp"

#include <algorithm>
#include <cmath>

#include "drawgraph/errors.hpp"
#include "drawgraph/jsonio.hpp"
#include "drawgraph/rng.hpp"

namespace drawgraph {

std::string to_string(ModelKind k) {
    switch (k) {
        case ModelKind::GS: return "gs";
        case ModelKind::GCN: return "gcn";
        case ModelKind::MLP: return "mlp";
    }
    return "?";
}

ModelKind model_kind_from_string(const std::string& s) {
    if (s == "gs") return ModelKind::GS;
    if (s == "gcn") return ModelKind::GCN;
    if (s == "mlp") return ModelKind::MLP;
    throw DataError("unknown model kind: " + s);
}

std::vector<LayerSpec> ModelConfig::layers() const {
    std::vector<LayerSpec> specs;
    int prev = in_dim;
    LayerType conv = kind == ModelKind::GCN ? LayerType::GcnConv : LayerType::SageConv;
    for (int w : conv_widths) {
        specs.push_back({conv, prev, w, true});
        prev = w;
    }
    for (std::size_t i = 0; i < linear_widths.size(); ++i) {
        bool last = i + 1 == linear_widths.size();
        specs.push_back({LayerType::Linear, prev, linear_widths[i], !last});
        prev = linear_widths[i];
    }
    return specs;
}

void ModelConfig::validate() const {
    if (in_dim <= 0 || num_classes < 2) throw DataError("invalid model config dimensions");
    if (linear_widths.empty() || linear_widths.back() != num_classes)
        throw DataError("model config must end in a linear layer of num_classes width");
    if (kind == ModelKind::MLP && !conv_widths.empty())
        throw DataError("MLP config cannot have conv layers");
    if (kind != ModelKind::MLP && conv_widths.empty())
        throw DataError("graph model config needs conv layers");
    for (int w : conv_widths)
        if (w <= 0) throw DataError("invalid layer width");
    for (int w : linear_widths)
        if (w <= 0) throw DataError("invalid layer width");
}

ModelConfig ModelConfig::preset(const std::string& name, int in_dim, int num_classes) {
    ModelConfig c;
    c.in_dim = in_dim;
    c.num_classes = num_classes;
    if (name == "gs3") {
        c.kind = ModelKind::GS;
        c.conv_widths = {32, 64, 128};
        c.linear_widths = {32, num_classes};
    } else if (name == "gs4") {
        c.kind = ModelKind::GS;
        c.conv_widths = {32, 64, 128, 256};
        c.linear_widths = {128, 32, num_classes};
    } else if (name == "gs5") {
        c.kind = ModelKind::GS;
        c.conv_widths = {32, 64, 128, 256, 512};
        c.linear_widths = {256, 128, 32, num_classes};
    } else if (name == "gcn") {
        c.kind = ModelKind::GCN;
        c.conv_widths = {32, 64, 128};
        c.linear_widths = {32, num_classes};
    } else if (name == "mlp") {
        c.kind = ModelKind::MLP;
        c.linear_widths = {32, 64, 128, 32, num_classes};
    } else {
        throw DataError("unknown model preset: " + name);
    }
    c.validate();
    return c;
}

namespace {

DenseMatrix glorot(int rows, int cols, Rng& rng) {
    DenseMatrix m(rows, cols);
    double limit = std::sqrt(6.0 / double(rows + cols));
    for (double& v : m.values) v = rng.uniform(-limit, limit);
    return m;
}

} // namespace

ModelParams init_params(const ModelConfig& config, std::uint64_t seed) {
    config.validate();
    Rng rng(seed);
    ModelParams p;
    p.config = config;
    for (const LayerSpec& spec : config.layers()) {
        LayerParams lp;
        lp.type = spec.type;
        lp.w_self = Tensor(spec.in, spec.out);
        lp.w_self.value = glorot(spec.in, spec.out, rng);
        if (spec.type == LayerType::SageConv) {
            lp.w_neigh = Tensor(spec.in, spec.out);
            lp.w_neigh.value = glorot(spec.in, spec.out, rng);
        }
        lp.bias = Tensor(1, spec.out);
        p.layers.push_back(std::move(lp));
    }
    return p;
}

GraphTopo GraphTopo::from_edges(int num_nodes, const std::vector<std::pair<int, int>>& edges) {
    GraphTopo t;
    t.num_nodes = num_nodes;
    t.neighbors.assign(std::size_t(num_nodes), {});
    for (auto [a, b] : edges) {
        if (a < 0 || b < 0 || a >= num_nodes || b >= num_nodes)
            throw DataError("edge index out of range");
        if (a == b) continue;
        t.neighbors[std::size_t(a)].push_back(b);
        t.neighbors[std::size_t(b)].push_back(a);
    }
    for (auto& nb : t.neighbors) {
        std::sort(nb.begin(), nb.end());
        nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    }
    return t;
}

DenseMatrix neighbor_mean(const DenseMatrix& h, const GraphTopo& topo) {
    if (h.rows != topo.num_nodes) throw DataError("feature/topology row mismatch");
    DenseMatrix m(h.rows, h.cols);
    for (int v = 0; v < h.rows; ++v) {
        const auto& nb = topo.neighbors[std::size_t(v)];
        if (nb.empty()) continue;
        double* out = m.row(v);
        for (int u : nb) {
            const double* in = h.row(u);
            for (int c = 0; c < h.cols; ++c) out[c] += in[c];
        }
        double inv = 1.0 / double(nb.size());
        for (int c = 0; c < h.cols; ++c) out[c] *= inv;
    }
    return m;
}

DenseMatrix gcn_propagate(const DenseMatrix& h, const GraphTopo& topo) {
    if (h.rows != topo.num_nodes) throw DataError("feature/topology row mismatch");
    DenseMatrix out(h.rows, h.cols);
    std::vector<double> inv_sqrt_deg(std::size_t(h.rows));
    for (int v = 0; v < h.rows; ++v)
        inv_sqrt_deg[std::size_t(v)] = 1.0 / std::sqrt(double(topo.neighbors[std::size_t(v)].size()) + 1.0);
    for (int v = 0; v < h.rows; ++v) {
        double* dst = out.row(v);
        double sv = inv_sqrt_deg[std::size_t(v)];
        // self loop
        {
            const double* src = h.row(v);
            double w = sv * sv;
            for (int c = 0; c < h.cols; ++c) dst[c] += w * src[c];
        }
        for (int u : topo.neighbors[std::size_t(v)]) {
            const double* src = h.row(u);
            double w = sv * inv_sqrt_deg[std::size_t(u)];
            for (int c = 0; c < h.cols; ++c) dst[c] += w * src[c];
        }
    }
    return out;
}

namespace {

void add_bias_rows(DenseMatrix& m, const DenseMatrix& bias) {
    if (bias.rows != 1 || bias.cols != m.cols) throw DataError("bias shape mismatch");
    for (int r = 0; r < m.rows; ++r) {
        double* row = m.row(r);
        for (int c = 0; c < m.cols; ++c) row[c] += bias.values[std::size_t(c)];
    }
}

void relu_inplace(DenseMatrix& m) {
    for (double& v : m.values)
        if (v < 0) v = 0;
}

} // namespace

DenseMatrix sage_conv_forward(const DenseMatrix& h, const GraphTopo& topo,
                              const DenseMatrix& w_self, const DenseMatrix& w_neigh,
                              const DenseMatrix& bias) {
    DenseMatrix z = multiply(h, w_self);
    DenseMatrix zm = multiply(neighbor_mean(h, topo), w_neigh);
    add_inplace(z, zm);
    add_bias_rows(z, bias);
    relu_inplace(z);
    return z;
}

DenseMatrix gcn_conv_forward(const DenseMatrix& h, const GraphTopo& topo, const DenseMatrix& w,
                             const DenseMatrix& bias) {
    DenseMatrix z = multiply(gcn_propagate(h, topo), w);
    add_bias_rows(z, bias);
    relu_inplace(z);
    return z;
}

DenseMatrix linear_forward(const DenseMatrix& h, const DenseMatrix& w, const DenseMatrix& bias,
                           bool relu) {
    DenseMatrix z = multiply(h, w);
    add_bias_rows(z, bias);
    if (relu) relu_inplace(z);
    return z;
}

DenseMatrix model_forward(const ModelParams& params, const GraphTopo& topo, const DenseMatrix& x,
                          std::vector<LayerCache>* caches) {
    std::vector<LayerSpec> specs = params.config.layers();
    if (caches) caches->clear();
    DenseMatrix h = x;
    for (std::size_t i = 0; i < params.layers.size(); ++i) {
        const LayerParams& lp = params.layers[i];
        const LayerSpec& spec = specs[i];
        LayerCache cache;
        cache.input = h;
        DenseMatrix z;
        if (lp.type == LayerType::SageConv) {
            cache.agg = neighbor_mean(h, topo);
            z = multiply(h, lp.w_self.value);
            add_inplace(z, multiply(cache.agg, lp.w_neigh.value));
        } else if (lp.type == LayerType::GcnConv) {
            cache.agg = gcn_propagate(h, topo);
            z = multiply(cache.agg, lp.w_self.value);
        } else {
            z = multiply(h, lp.w_self.value);
        }
        add_bias_rows(z, lp.bias.value);
        cache.pre = z;
        if (spec.relu) relu_inplace(z);
        if (caches) caches->push_back(std::move(cache));
        h = std::move(z);
    }
    return h;
}

LossResult softmax_cross_entropy(const DenseMatrix& logits, const std::vector<int>& labels) {
    if (logits.rows == 0) throw DataError("softmax_cross_entropy on empty input");
    if (int(labels.size()) != logits.rows) throw DataError("label count mismatch");
    LossResult res;
    res.dlogits = DenseMatrix(logits.rows, logits.cols);
    double total = 0.0;
    for (int r = 0; r < logits.rows; ++r) {
        int label = labels[std::size_t(r)];
        if (label < 0 || label >= logits.cols) throw DataError("label out of range");
        const double* in = logits.row(r);
        double mx = in[0];
        for (int c = 1; c < logits.cols; ++c) mx = std::max(mx, in[c]);
        double denom = 0.0;
        for (int c = 0; c < logits.cols; ++c) denom += std::exp(in[c] - mx);
        double log_denom = std::log(denom);
        total += -(in[label] - mx - log_denom);
        double* out = res.dlogits.row(r);
        for (int c = 0; c < logits.cols; ++c)
            out[c] = std::exp(in[c] - mx - log_denom) / double(logits.rows);
        out[label] -= 1.0 / double(logits.rows);
    }
    res.loss = total / double(logits.rows);
    return res;
}

namespace {

DenseMatrix column_sums(const DenseMatrix& m) {
    DenseMatrix out(1, m.cols);
    for (int r = 0; r < m.rows; ++r) {
        const double* row = m.row(r);
        for (int c = 0; c < m.cols; ++c) out.values[std::size_t(c)] += row[c];
    }
    return out;
}

// Adjoint of neighbor_mean: routes dM_v / deg(v) back to each neighbor.
DenseMatrix neighbor_mean_backward(const DenseMatrix& dm, const GraphTopo& topo) {
    DenseMatrix out(dm.rows, dm.cols);
    for (int v = 0; v < dm.rows; ++v) {
        const auto& nb = topo.neighbors[std::size_t(v)];
        if (nb.empty()) continue;
        double inv = 1.0 / double(nb.size());
        const double* src = dm.row(v);
        for (int u : nb) {
            double* dst = out.row(u);
            for (int c = 0; c < dm.cols; ++c) dst[c] += src[c] * inv;
        }
    }
    return out;
}

} // namespace

std::vector<LayerGrads> model_backward(const ModelParams& params, const GraphTopo& topo,
                                       const std::vector<LayerCache>& caches,
                                       const DenseMatrix& dlogits) {
    if (caches.size() != params.layers.size())
        throw DataError("model_backward: missing forward caches");
    std::vector<LayerSpec> specs = params.config.layers();
    std::vector<LayerGrads> grads(params.layers.size());

    DenseMatrix dh = dlogits;
    for (int i = int(params.layers.size()) - 1; i >= 0; --i) {
        const LayerParams& lp = params.layers[std::size_t(i)];
        const LayerCache& cache = caches[std::size_t(i)];
        LayerGrads& g = grads[std::size_t(i)];

        DenseMatrix dpre = std::move(dh);
        if (specs[std::size_t(i)].relu) {
            for (std::size_t k = 0; k < dpre.values.size(); ++k)
                if (cache.pre.values[k] <= 0.0) dpre.values[k] = 0.0;
        }
        g.bias = column_sums(dpre);
        if (lp.type == LayerType::SageConv) {
            g.w_self = multiply_at_b(cache.input, dpre);
            g.w_neigh = multiply_at_b(cache.agg, dpre);
            dh = multiply_a_bt(dpre, lp.w_self.value);
            add_inplace(dh, neighbor_mean_backward(multiply_a_bt(dpre, lp.w_neigh.value), topo));
        } else if (lp.type == LayerType::GcnConv) {
            g.w_self = multiply_at_b(cache.agg, dpre);
            // S is symmetric, so the adjoint is another propagate.
            dh = gcn_propagate(multiply_a_bt(dpre, lp.w_self.value), topo);
        } else {
            g.w_self = multiply_at_b(cache.input, dpre);
            dh = multiply_a_bt(dpre, lp.w_self.value);
        }
    }
    return grads;
}

DenseMatrix features_matrix(const ComponentGraph& g) {
    DenseMatrix x(g.num_nodes(), g.feature_dim());
    for (int i = 0; i < g.num_nodes(); ++i) {
        const auto& f = g.nodes[std::size_t(i)].features;
        if (int(f.size()) != g.feature_dim()) throw DataError("feature length mismatch");
        std::copy(f.begin(), f.end(), x.row(i));
    }
    return x;
}

void ensure_compatible(const ModelParams& params, const ComponentGraph& g) {
    if (params.config.in_dim != g.feature_dim())
        throw DataError("feature dimension mismatch: model expects " +
                        std::to_string(params.config.in_dim) + ", graph has " +
                        std::to_string(g.feature_dim()));
    if (params.config.num_classes != g.scheme.num_classes())
        throw DataError("class count mismatch: model has " +
                        std::to_string(params.config.num_classes) + " classes, graph scheme has " +
                        std::to_string(g.scheme.num_classes()));
}

std::vector<int> argmax_rows(const DenseMatrix& logits) {
    std::vector<int> out(std::size_t(logits.rows), 0);
    for (int r = 0; r < logits.rows; ++r) {
        const double* row = logits.row(r);
        int best = 0;
        for (int c = 1; c < logits.cols; ++c)
            if (row[c] > row[best]) best = c;
        out[std::size_t(r)] = best;
    }
    return out;
}

std::vector<int> predict(const ComponentGraph& g, const ModelParams& params) {
    ensure_compatible(params, g);
    GraphTopo topo = GraphTopo::from_edges(g.num_nodes(), g.edges);
    DenseMatrix logits = model_forward(params, topo, features_matrix(g));
    return argmax_rows(logits);
}

namespace {

nlohmann::json matrix_to_json(const DenseMatrix& m) {
    return {{"rows", m.rows}, {"cols", m.cols}, {"values", m.values}};
}

DenseMatrix matrix_from_json(const nlohmann::json& j) {
    DenseMatrix m(j.at("rows").get<int>(), j.at("cols").get<int>());
    m.values = j.at("values").get<std::vector<double>>();
    if (m.values.size() != std::size_t(m.rows) * std::size_t(m.cols))
        throw DataError("matrix value count mismatch in model file");
    return m;
}

nlohmann::json tensor_to_json(const Tensor& t) {
    return {{"value", matrix_to_json(t.value)},
            {"adam_m", matrix_to_json(t.adam_m)},
            {"adam_v", matrix_to_json(t.adam_v)}};
}

Tensor tensor_from_json(const nlohmann::json& j) {
    Tensor t;
    t.value = matrix_from_json(j.at("value"));
    t.adam_m = matrix_from_json(j.at("adam_m"));
    t.adam_v = matrix_from_json(j.at("adam_v"));
    if (!t.value.same_shape(t.adam_m) || !t.value.same_shape(t.adam_v))
        throw DataError("optimizer state shape mismatch in model file");
    return t;
}

std::string layer_type_name(LayerType t) {
    switch (t) {
        case LayerType::SageConv: return "sage";
        case LayerType::GcnConv: return "gcn";
        case LayerType::Linear: return "linear";
    }
    return "?";
}

LayerType layer_type_from(const std::string& s) {
    if (s == "sage") return LayerType::SageConv;
    if (s == "gcn") return LayerType::GcnConv;
    if (s == "linear") return LayerType::Linear;
    throw DataError("unknown layer type in model file: " + s);
}

} // namespace

void save_model(const ModelParams& params, const std::string& path) {
    nlohmann::json j;
    j["version"] = 1;
    j["config"] = {{"kind", to_string(params.config.kind)},
                   {"conv_widths", params.config.conv_widths},
                   {"linear_widths", params.config.linear_widths},
                   {"in_dim", params.config.in_dim},
                   {"num_classes", params.config.num_classes}};
    nlohmann::json layers = nlohmann::json::array();
    for (const LayerParams& lp : params.layers) {
        nlohmann::json layer;
        layer["type"] = layer_type_name(lp.type);
        layer["w_self"] = tensor_to_json(lp.w_self);
        if (lp.type == LayerType::SageConv) layer["w_neigh"] = tensor_to_json(lp.w_neigh);
        layer["bias"] = tensor_to_json(lp.bias);
        layers.push_back(std::move(layer));
    }
    j["layers"] = std::move(layers);
    j["step"] = params.step;
    j["best_val_accuracy"] = params.best_val_accuracy;
    write_json_atomic(j, path);
}

ModelParams load_model(const std::string& path) {
    nlohmann::json j = read_json(path);
    try {
        if (!j.contains("version") || j["version"].get<int>() != 1)
            throw DataError("model file version mismatch: " + path);
        ModelParams p;
        const auto& cfg = j.at("config");
        p.config.kind = model_kind_from_string(cfg.at("kind").get<std::string>());
        p.config.conv_widths = cfg.at("conv_widths").get<std::vector<int>>();
        p.config.linear_widths = cfg.at("linear_widths").get<std::vector<int>>();
        p.config.in_dim = cfg.at("in_dim").get<int>();
        p.config.num_classes = cfg.at("num_classes").get<int>();
        p.config.validate();

        std::vector<LayerSpec> specs = p.config.layers();
        const auto& layers = j.at("layers");
        if (layers.size() != specs.size())
            throw DataError("model layer count mismatch in " + path);
        for (std::size_t i = 0; i < layers.size(); ++i) {
            const auto& lj = layers[i];
            LayerParams lp;
            lp.type = layer_type_from(lj.at("type").get<std::string>());
            LayerType expected = specs[i].type;
            if (lp.type != expected) throw DataError("model layer type mismatch in " + path);
            lp.w_self = tensor_from_json(lj.at("w_self"));
            if (lp.w_self.value.rows != specs[i].in || lp.w_self.value.cols != specs[i].out)
                throw DataError("model weight shape mismatch in " + path);
            if (lp.type == LayerType::SageConv) {
                lp.w_neigh = tensor_from_json(lj.at("w_neigh"));
                if (!lp.w_neigh.value.same_shape(lp.w_self.value))
                    throw DataError("model weight shape mismatch in " + path);
            }
            lp.bias = tensor_from_json(lj.at("bias"));
            if (lp.bias.value.rows != 1 || lp.bias.value.cols != specs[i].out)
                throw DataError("model bias shape mismatch in " + path);
            p.layers.push_back(std::move(lp));
        }
        p.step = j.at("step").get<long>();
        p.best_val_accuracy = j.value("best_val_accuracy", 0.0);
        return p;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("malformed model file " + path + ": " + e.what());
    }
}

} // namespace drawgraph
