#include <doctest.h>

#include <cmath>

#include "drawgraph/errors.hpp"
#include "drawgraph/metrics.hpp"
#include "drawgraph/model.hpp"
#include "drawgraph/rng.hpp"
#include "drawgraph/train.hpp"
#include "helpers.hpp"

using namespace drawgraph;

namespace {

// Random labeled graph with plausible feature scales (n=4 -> dim 19).
ComponentGraph toy_graph(std::uint64_t seed, int nodes, int num_classes, double edge_prob = 0.4) {
    Rng rng(seed);
    ComponentGraph g;
    g.n = 4;
    g.scheme = num_classes == 2 ? LabelScheme::two_class() : LabelScheme::three_class();
    for (int i = 0; i < nodes; ++i) {
        GraphNode node;
        node.features.resize(19);
        for (double& f : node.features) f = rng.uniform(0.1, 1.2);
        g.nodes.push_back(std::move(node));
        g.labels.push_back(rng.uniform_int(0, num_classes - 1));
    }
    for (int i = 0; i < nodes; ++i)
        for (int j = i + 1; j < nodes; ++j)
            if (rng.uniform() < edge_prob) g.edges.push_back({i, j});
    return g;
}

DenseMatrix identity(int n) {
    DenseMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
}

double fd_max_rel_err(const ModelConfig& mc, std::uint64_t seed, int max_per_tensor) {
    ComponentGraph g = toy_graph(seed, 6, mc.num_classes, 0.5);
    GraphTopo topo = GraphTopo::from_edges(g.num_nodes(), g.edges);
    DenseMatrix x = features_matrix(g);
    ModelParams params = init_params(mc, seed + 1);

    std::vector<LayerCache> caches;
    DenseMatrix logits = model_forward(params, topo, x, &caches);
    LossResult base = softmax_cross_entropy(logits, g.labels);
    auto grads = model_backward(params, topo, caches, base.dlogits);

    auto loss_at = [&]() {
        return softmax_cross_entropy(model_forward(params, topo, x), g.labels).loss;
    };

    const double h = 1e-5;
    double max_rel = 0.0;
    auto check_tensor = [&](DenseMatrix& value, const DenseMatrix& grad) {
        std::size_t count = value.values.size();
        std::size_t stride = max_per_tensor > 0 && count > std::size_t(max_per_tensor)
                                 ? count / std::size_t(max_per_tensor)
                                 : 1;
        for (std::size_t i = 0; i < count; i += stride) {
            double saved = value.values[i];
            value.values[i] = saved + h;
            double up = loss_at();
            value.values[i] = saved - h;
            double down = loss_at();
            value.values[i] = saved;
            double fd = (up - down) / (2 * h);
            double a = grad.values[i];
            double rel = std::abs(a - fd) / std::max({std::abs(a), std::abs(fd), 1e-6});
            max_rel = std::max(max_rel, rel);
        }
    };
    for (std::size_t li = 0; li < params.layers.size(); ++li) {
        LayerParams& lp = params.layers[li];
        check_tensor(lp.w_self.value, grads[li].w_self);
        if (lp.type == LayerType::SageConv) check_tensor(lp.w_neigh.value, grads[li].w_neigh);
        check_tensor(lp.bias.value, grads[li].bias);
    }
    return max_rel;
}

} // namespace

TEST_CASE("sage conv: isolated node aggregates a zero neighbor mean") {
    DenseMatrix h(1, 2);
    h.values = {0.5, 2.0};
    GraphTopo topo = GraphTopo::from_edges(1, {});
    DenseMatrix w_self = identity(2), w_neigh = identity(2), bias(1, 2);
    bias.values = {-1.0, 0.0};
    DenseMatrix out = sage_conv_forward(h, topo, w_self, w_neigh, bias);
    CHECK(out.at(0, 0) == doctest::Approx(0.0)); // relu(0.5 - 1)
    CHECK(out.at(0, 1) == doctest::Approx(2.0));
}

TEST_CASE("sage conv: identity self weight passes features through") {
    DenseMatrix h(3, 2);
    h.values = {1, 2, 3, 4, 5, 6};
    GraphTopo topo = GraphTopo::from_edges(3, {{0, 1}, {1, 2}});
    DenseMatrix out = sage_conv_forward(h, topo, identity(2), DenseMatrix(2, 2), DenseMatrix(1, 2));
    CHECK(out.values == h.values);
}

TEST_CASE("sage conv: pure neighbor weight swaps rows of a 2-node edge") {
    DenseMatrix h(2, 2);
    h.values = {1, 2, 3, 4};
    GraphTopo topo = GraphTopo::from_edges(2, {{0, 1}});
    DenseMatrix out = sage_conv_forward(h, topo, DenseMatrix(2, 2), identity(2), DenseMatrix(1, 2));
    CHECK(out.at(0, 0) == 3);
    CHECK(out.at(0, 1) == 4);
    CHECK(out.at(1, 0) == 1);
    CHECK(out.at(1, 1) == 2);
}

TEST_CASE("gcn conv: a single node reduces to relu(HW + b)") {
    DenseMatrix h(1, 1);
    h.values = {2.0};
    GraphTopo topo = GraphTopo::from_edges(1, {});
    DenseMatrix w = identity(1), bias(1, 1);
    bias.values = {0.5};
    DenseMatrix out = gcn_conv_forward(h, topo, w, bias);
    CHECK(out.at(0, 0) == doctest::Approx(2.5));
}

TEST_CASE("gcn conv: symmetric nodes produce identical rows") {
    DenseMatrix h(2, 1);
    h.values = {1.5, 1.5};
    GraphTopo topo = GraphTopo::from_edges(2, {{0, 1}});
    DenseMatrix out = gcn_conv_forward(h, topo, identity(1), DenseMatrix(1, 1));
    CHECK(out.at(0, 0) == doctest::Approx(out.at(1, 0)));
}

TEST_CASE("gcn conv matches the hand-computed 3-node path") {
    DenseMatrix h(3, 1);
    h.values = {1, 2, 3};
    GraphTopo topo = GraphTopo::from_edges(3, {{0, 1}, {1, 2}});
    DenseMatrix out = gcn_conv_forward(h, topo, identity(1), DenseMatrix(1, 1));
    double s6 = std::sqrt(6.0);
    CHECK(out.at(0, 0) == doctest::Approx(0.5 + 2.0 / s6).epsilon(1e-12));
    CHECK(out.at(1, 0) == doctest::Approx(1.0 / s6 + 2.0 / 3.0 + 3.0 / s6).epsilon(1e-12));
    CHECK(out.at(2, 0) == doctest::Approx(2.0 / s6 + 1.5).epsilon(1e-12));
}

TEST_CASE("linear layer examples") {
    DenseMatrix h(1, 2);
    h.values = {1, -1};
    CHECK(linear_forward(h, identity(2), DenseMatrix(1, 2), true).values ==
          std::vector<double>{1, 0});

    DenseMatrix zero_w(2, 2);
    DenseMatrix bias(1, 2);
    bias.values = {3.0, -2.0};
    DenseMatrix out = linear_forward(h, zero_w, bias, true);
    CHECK(out.values == std::vector<double>{3, 0});

    DenseMatrix raw = linear_forward(h, zero_w, bias, false);
    CHECK(raw.values == std::vector<double>{3, -2});
}

TEST_CASE("softmax cross entropy on uniform logits is ln(num_classes)") {
    DenseMatrix logits(4, 3, 0.7);
    std::vector<int> labels = {0, 1, 2, 1};
    LossResult r = softmax_cross_entropy(logits, labels);
    CHECK(std::abs(r.loss - std::log(3.0)) < 1e-12);
}

TEST_CASE("softmax cross entropy with a huge margin is ~zero") {
    DenseMatrix logits(1, 2);
    logits.values = {50.0, 0.0};
    LossResult r = softmax_cross_entropy(logits, {0});
    CHECK(r.loss < 1e-20);
}

TEST_CASE("softmax cross entropy scalar case [[1,2]]") {
    DenseMatrix logits(1, 2);
    logits.values = {1.0, 2.0};
    // -log p[k]: label 0 -> ln(1+e); label 1 -> ln(1+e) - 1
    CHECK(softmax_cross_entropy(logits, {0}).loss ==
          doctest::Approx(std::log(1.0 + std::exp(1.0))).epsilon(1e-12));
    CHECK(softmax_cross_entropy(logits, {1}).loss ==
          doctest::Approx(std::log(1.0 + std::exp(1.0)) - 1.0).epsilon(1e-12));
    // dlogits = softmax - onehot
    LossResult r = softmax_cross_entropy(logits, {0});
    double p0 = 1.0 / (1.0 + std::exp(1.0));
    CHECK(r.dlogits.at(0, 0) == doctest::Approx(p0 - 1.0).epsilon(1e-12));
    CHECK(r.dlogits.at(0, 1) == doctest::Approx(1.0 - p0).epsilon(1e-12));
}

TEST_CASE("analytic gradients match central finite differences") {
    CHECK(fd_max_rel_err(ModelConfig::preset("gs3", 19, 3), 101, 0) < 1e-4);
    CHECK(fd_max_rel_err(ModelConfig::preset("gcn", 19, 3), 102, 0) < 1e-4);
    CHECK(fd_max_rel_err(ModelConfig::preset("mlp", 19, 3), 103, 0) < 1e-4);
    // deeper presets, sampled parameters
    CHECK(fd_max_rel_err(ModelConfig::preset("gs4", 19, 3), 104, 120) < 1e-4);
    CHECK(fd_max_rel_err(ModelConfig::preset("gs5", 19, 3), 105, 60) < 1e-4);
}

TEST_CASE("zero dlogits back-propagates to all-zero gradients") {
    ComponentGraph g = toy_graph(55, 5, 3);
    GraphTopo topo = GraphTopo::from_edges(g.num_nodes(), g.edges);
    ModelParams params = init_params(ModelConfig::preset("gs3", 19, 3), 5);
    std::vector<LayerCache> caches;
    DenseMatrix logits = model_forward(params, topo, features_matrix(g), &caches);
    DenseMatrix zero(logits.rows, logits.cols);
    auto grads = model_backward(params, topo, caches, zero);
    for (const auto& lg : grads) {
        for (double v : lg.w_self.values) CHECK(v == 0.0);
        for (double v : lg.bias.values) CHECK(v == 0.0);
    }
}

TEST_CASE("twin nodes with identical features and neighborhoods get equal gradients") {
    // nodes 0 and 1 both connect only to node 2 and share features
    ComponentGraph g = toy_graph(66, 3, 3, 0.0);
    g.nodes[1].features = g.nodes[0].features;
    g.edges = {{0, 2}, {1, 2}};
    g.labels = {1, 1, 0};
    GraphTopo topo = GraphTopo::from_edges(3, g.edges);
    ModelParams params = init_params(ModelConfig::preset("gs3", 19, 3), 6);
    std::vector<LayerCache> caches;
    DenseMatrix logits = model_forward(params, topo, features_matrix(g), &caches);
    for (int c = 0; c < logits.cols; ++c)
        CHECK(logits.at(0, c) == doctest::Approx(logits.at(1, c)).epsilon(1e-12));
}

TEST_CASE("adam: zero gradient and zero decay leave parameters unchanged") {
    ModelConfig mc;
    mc.kind = ModelKind::MLP;
    mc.linear_widths = {2};
    mc.in_dim = 1;
    mc.num_classes = 2;
    ModelParams p = init_params(mc, 3);
    std::vector<double> before = p.layers[0].w_self.value.values;

    std::vector<LayerGrads> grads(1);
    grads[0].w_self = DenseMatrix(1, 2);
    grads[0].bias = DenseMatrix(1, 2);
    TrainConfig tc;
    tc.weight_decay = 0.0;
    adam_step(p, grads, tc);
    CHECK(p.layers[0].w_self.value.values == before);
    CHECK(p.step == 1);
}

TEST_CASE("adam: first-step update magnitude is ~lr") {
    ModelConfig mc;
    mc.kind = ModelKind::MLP;
    mc.linear_widths = {2};
    mc.in_dim = 1;
    mc.num_classes = 2;
    ModelParams p = init_params(mc, 3);
    double theta0 = p.layers[0].w_self.value.values[0];

    std::vector<LayerGrads> grads(1);
    grads[0].w_self = DenseMatrix(1, 2);
    grads[0].w_self.values[0] = 0.37; // arbitrary nonzero gradient
    grads[0].bias = DenseMatrix(1, 2);
    TrainConfig tc;
    tc.weight_decay = 0.0;
    adam_step(p, grads, tc);
    double delta = p.layers[0].w_self.value.values[0] - theta0;
    CHECK(delta < 0);
    CHECK(std::abs(std::abs(delta) - tc.learning_rate) < 1e-6);
}

TEST_CASE("adam: coupled decay acts as an extra gradient wd*theta") {
    ModelConfig mc;
    mc.kind = ModelKind::MLP;
    mc.linear_widths = {2};
    mc.in_dim = 1;
    mc.num_classes = 2;
    ModelParams p = init_params(mc, 3);
    p.layers[0].w_self.value.values[0] = 1.0;

    std::vector<LayerGrads> grads(1);
    grads[0].w_self = DenseMatrix(1, 2); // zero loss gradient
    grads[0].bias = DenseMatrix(1, 2);
    TrainConfig tc; // wd = 5e-4
    adam_step(p, grads, tc);
    // first moment recorded the decay-coupled gradient exactly
    CHECK(p.layers[0].w_self.adam_m.values[0] == doctest::Approx(0.1 * 5e-4).epsilon(1e-12));
    // biases are exempt from decay
    CHECK(p.layers[0].bias.value.values[0] == 0.0);
}

TEST_CASE("train splits 10 graphs into 8 train / 2 validation") {
    std::vector<ComponentGraph> ds;
    for (int i = 0; i < 10; ++i) ds.push_back(toy_graph(200 + std::uint64_t(i), 6, 3));
    TrainConfig tc;
    tc.max_epochs = 3;
    tc.seed = 9;
    TrainResult r = train(ds, ModelConfig::preset("mlp", 19, 3), tc);
    CHECK(r.num_train == 8);
    CHECK(r.num_val == 2);
    CHECK(r.history.size() == 3);
}

TEST_CASE("training is deterministic for a fixed seed") {
    std::vector<ComponentGraph> ds;
    for (int i = 0; i < 6; ++i) ds.push_back(toy_graph(300 + std::uint64_t(i), 8, 3));
    TrainConfig tc;
    tc.max_epochs = 5;
    tc.seed = 4242;
    TrainResult a = train(ds, ModelConfig::preset("gs3", 19, 3), tc);
    TrainResult b = train(ds, ModelConfig::preset("gs3", 19, 3), tc);
    CHECK(a.history == b.history);
    CHECK(a.best_val_accuracy == b.best_val_accuracy);
    CHECK(a.best_epoch == b.best_epoch);
}

TEST_CASE("train refuses mixed schemes and single graphs") {
    std::vector<ComponentGraph> ds = {toy_graph(1, 5, 3)};
    TrainConfig tc;
    CHECK_THROWS_AS(train(ds, ModelConfig::preset("gs3", 19, 3), tc), DataError);
    ds.push_back(toy_graph(2, 5, 2)); // different scheme
    CHECK_THROWS_AS(train(ds, ModelConfig::preset("gs3", 19, 3), tc), DataError);
}

TEST_CASE("loss decreases when overfitting a single tiny graph") {
    ComponentGraph g = toy_graph(77, 10, 3);
    TrainConfig tc;
    tc.max_epochs = 500;
    tc.seed = 7;
    TrainResult r = train_with_split({&g}, {&g}, ModelConfig::preset("gs3", 19, 3), tc);
    CHECK(r.history.back().train_loss < r.history.front().train_loss);
}

TEST_CASE("argmax breaks ties toward the lowest class index") {
    DenseMatrix logits(2, 3);
    logits.values = {1.0, 1.0, 0.5, 0.2, 0.9, 0.9};
    std::vector<int> pred = argmax_rows(logits);
    CHECK(pred == std::vector<int>{0, 1});
}

TEST_CASE("predict is permutation equivariant") {
    ComponentGraph g = toy_graph(88, 9, 3, 0.5);
    ModelParams params = init_params(ModelConfig::preset("gs3", 19, 3), 12);
    std::vector<int> base = predict(g, params);

    // reverse permutation
    int n = g.num_nodes();
    ComponentGraph perm = g;
    for (int i = 0; i < n; ++i) perm.nodes[std::size_t(i)] = g.nodes[std::size_t(n - 1 - i)];
    perm.edges.clear();
    for (auto [a, b] : g.edges) {
        int pa = n - 1 - a, pb = n - 1 - b;
        perm.edges.push_back({std::min(pa, pb), std::max(pa, pb)});
    }
    std::vector<int> permuted = predict(perm, params);
    for (int i = 0; i < n; ++i) CHECK(permuted[std::size_t(i)] == base[std::size_t(n - 1 - i)]);
}

TEST_CASE("a disjoint union forward equals the per-graph forwards") {
    ComponentGraph a = toy_graph(91, 7, 3), b = toy_graph(92, 5, 3);
    ModelParams params = init_params(ModelConfig::preset("gs3", 19, 3), 14);
    UnionBatch batch = union_batch({&a, &b});
    DenseMatrix united = model_forward(params, batch.topo, batch.features);

    DenseMatrix fa = model_forward(params, GraphTopo::from_edges(a.num_nodes(), a.edges),
                                   features_matrix(a));
    DenseMatrix fb = model_forward(params, GraphTopo::from_edges(b.num_nodes(), b.edges),
                                   features_matrix(b));
    for (int i = 0; i < fa.rows; ++i)
        for (int c = 0; c < fa.cols; ++c)
            CHECK(std::abs(united.at(i, c) - fa.at(i, c)) < 1e-10);
    for (int i = 0; i < fb.rows; ++i)
        for (int c = 0; c < fb.cols; ++c)
            CHECK(std::abs(united.at(fa.rows + i, c) - fb.at(i, c)) < 1e-10);
}

TEST_CASE("compute_metrics reproduces the 3-class confusion arithmetic") {
    ConfusionMatrix cm(3);
    long counts[3][3] = {{4238, 130, 710}, {105, 9229, 273}, {761, 352, 9589}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) cm.add(i, j, counts[i][j]);
    MetricsReport r = compute_metrics(cm);
    CHECK(*r.per_class[0].precision * 100 == doctest::Approx(83.03).epsilon(0.0001));
    CHECK(*r.per_class[1].precision * 100 == doctest::Approx(95.04).epsilon(0.0001));
    CHECK(*r.per_class[2].precision * 100 == doctest::Approx(90.70).epsilon(0.0001));
    CHECK(*r.per_class[0].recall * 100 == doctest::Approx(83.46).epsilon(0.0001));
    CHECK(*r.per_class[1].recall * 100 == doctest::Approx(96.07).epsilon(0.0001));
    CHECK(*r.per_class[2].recall * 100 == doctest::Approx(89.60).epsilon(0.0001));
    CHECK(r.accuracy * 100 == doctest::Approx(90.82).epsilon(0.0001));
}

TEST_CASE("compute_metrics on the 2-class counts (as computed, not as printed)") {
    ConfusionMatrix cm(2);
    cm.add(0, 0, 21103);
    cm.add(0, 1, 304);
    cm.add(1, 0, 345);
    cm.add(1, 1, 13559);
    MetricsReport r = compute_metrics(cm);
    // direct arithmetic on the counts
    CHECK(*r.per_class[0].precision == doctest::Approx(21103.0 / 21448.0).epsilon(1e-12));
    CHECK(*r.per_class[0].recall == doctest::Approx(21103.0 / 21407.0).epsilon(1e-12));
    CHECK(r.accuracy == doctest::Approx(34662.0 / 35311.0).epsilon(1e-12));
    CHECK(*r.per_class[0].precision * 100 == doctest::Approx(98.39).epsilon(0.0001));
    CHECK(*r.per_class[0].recall * 100 == doctest::Approx(98.58).epsilon(0.0001));
    CHECK(r.accuracy * 100 == doctest::Approx(98.16).epsilon(0.0001));
}

TEST_CASE("compute_metrics: diagonal matrix scores 100%, zero rows are absent") {
    ConfusionMatrix cm(3);
    cm.add(0, 0, 5);
    cm.add(2, 2, 7);
    MetricsReport r = compute_metrics(cm);
    CHECK(r.accuracy == 1.0);
    CHECK(*r.per_class[0].precision == 1.0);
    CHECK(!r.per_class[1].precision.has_value());
    CHECK(!r.per_class[1].recall.has_value());

    ConfusionMatrix zero(2);
    CHECK_THROWS_AS(compute_metrics(zero), DataError);
}

TEST_CASE("models round-trip through save/load with identical predictions") {
    ComponentGraph g = toy_graph(123, 8, 3);
    ModelParams params = init_params(ModelConfig::preset("gs3", 19, 3), 31);
    params.step = 17;
    std::vector<int> before = predict(g, params);

    auto path = (testutil::temp_dir() / "model.json").string();
    save_model(params, path);
    ModelParams back = load_model(path);
    CHECK(back.step == 17);
    CHECK(predict(g, back) == before);
    // bitwise identical parameters
    for (std::size_t i = 0; i < params.layers.size(); ++i) {
        CHECK(back.layers[i].w_self.value == params.layers[i].w_self.value);
        CHECK(back.layers[i].bias.value == params.layers[i].bias.value);
        CHECK(back.layers[i].w_self.adam_m == params.layers[i].w_self.adam_m);
    }
}

TEST_CASE("loading a 2-class model for a 3-class graph is a class count mismatch") {
    ComponentGraph g = toy_graph(124, 5, 3);
    ModelParams params = init_params(ModelConfig::preset("gs3", 19, 2), 3);
    CHECK_THROWS_WITH_AS(predict(g, params), doctest::Contains("class count mismatch"),
                         DataError);
}

TEST_CASE("model files with tampered shapes are rejected") {
    ModelParams params = init_params(ModelConfig::preset("mlp", 19, 3), 3);
    auto path = (testutil::temp_dir() / "model2.json").string();
    save_model(params, path);
    std::string text = testutil::read_file(path);
    auto pos = text.find("\"in_dim\": 19");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 12, "\"in_dim\": 21");
    CHECK_THROWS_AS(load_model(testutil::write_file("tampered.model.json", text)), DataError);
}
