#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "support/oracles.hpp"
#include "zeroone/convex.hpp"

using namespace zeroone;

namespace {

Dataset two_blobs(std::uint64_t seed, int per_class = 30) {
    Dataset data;
    data.d = 3;
    auto rng = substream(seed, "blobs");
    std::uniform_real_distribution<double> jitter(-0.08, 0.08);
    for (int i = 0; i < 2 * per_class; ++i) {
        const bool pos = i % 2 == 1;
        data.x.push_back((pos ? 0.72 : 0.28) + jitter(rng));
        data.x.push_back((pos ? 0.70 : 0.30) + jitter(rng));
        data.x.push_back(0.5 + jitter(rng));
        data.y.push_back(pos ? 1 : 0);
    }
    data.n = 2 * per_class;
    return data;
}

std::vector<double> random_point(std::size_t d, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.05, 0.95);
    std::vector<double> x(d);
    for (auto& v : x) v = u(rng);
    return x;
}

}  // namespace

TEST_CASE("backprop matches central differences on binary heads") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 6; ++trial) {
        const LogisticMlp m = make_mlp({5, 7, 1}, false, 100 + trial);
        const auto x = random_point(5, rng);
        for (int target : {-1, 1}) {
            const auto r = oracles::check_gradients(m, x, target);
            INFO("trial " << trial << " target " << target);
            REQUIRE(r.max_rel_err < 1e-5);
        }
    }
    // two hidden layers
    const LogisticMlp deep = make_mlp({4, 6, 3, 1}, false, 9);
    const auto x = random_point(4, rng);
    REQUIRE(oracles::check_gradients(deep, x, 1).max_rel_err < 1e-5);
}

TEST_CASE("backprop matches central differences on the softmax head") {
    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 4; ++trial) {
        const LogisticMlp m = make_mlp({5, 8, 4}, true, 200 + trial);
        const auto x = random_point(5, rng);
        for (int target = 0; target < 4; ++target) {
            const auto r = oracles::check_gradients(m, x, target);
            REQUIRE(r.max_rel_err < 1e-5);
        }
    }
}

TEST_CASE("input gradient drives an effective one-step perturbation") {
    const Dataset data = two_blobs(1);
    const BinaryView view = binary_view(data, 1, 0);
    SgdConfig cfg;
    cfg.rate = 0.05;
    cfg.epochs = 120;
    cfg.batch = 20;
    cfg.seed = 4;
    const LogisticMlp m = train_mlp(view, {6}, cfg);

    // moving along +gx must raise the loss for a small enough step
    MlpActivations act;
    MlpGradients g;
    std::size_t checked = 0;
    for (std::size_t i = 0; i < view.size() && checked < 10; ++i) {
        mlp_forward(m, view.example(i), act);
        mlp_backward(m, act, view.label(i), g);
        double norm = 0.0;
        for (double v : g.gx) norm += v * v;
        if (norm < 1e-10) continue;
        std::vector<double> x(view.example(i), view.example(i) + view.dim());
        const double before = mlp_loss(m, x.data(), view.label(i));
        for (std::size_t j = 0; j < x.size(); ++j) x[j] += 1e-4 * g.gx[j];
        REQUIRE(mlp_loss(m, x.data(), view.label(i)) > before);
        ++checked;
    }
    REQUIRE(checked > 0);
}

TEST_CASE("hinge momentum and l2 follow the update rule exactly") {
    // one example per class; the full batch sums both gradients before the
    // update, so the epoch shuffle cannot change the arithmetic and every
    // quantity is computable by hand
    Dataset data;
    data.d = 2;
    data.x = {0.5, 0.25, 0.1, 0.9};
    data.y = {1, 0};
    data.n = 2;
    const BinaryView view = binary_view(data, 1, 0);

    SgdConfig cfg;
    cfg.batch = 2;
    cfg.momentum = 0.5;
    cfg.rate = 0.1;
    cfg.epochs = 2;
    cfg.seed = 77;
    const double l2 = 0.1;

    // replicate the documented init stream
    auto init = substream(cfg.seed, "hinge-init");
    std::normal_distribution<double> normal(0.0, 1.0);
    const double scale = 1.0 / std::sqrt(2.0);
    double w[2] = {normal(init) * scale, normal(init) * scale};
    double w0 = 0.0;

    const double xs[2][2] = {{0.5, 0.25}, {0.1, 0.9}};
    const int ys[2] = {1, -1};
    double vw[2] = {0.0, 0.0}, v0 = 0.0;
    for (int step = 0; step < 2; ++step) {
        double gw[2] = {0.0, 0.0}, g0 = 0.0;
        for (int e = 0; e < 2; ++e) {
            const double margin =
                ys[e] * (w0 + w[0] * xs[e][0] + w[1] * xs[e][1]);
            if (margin < 1.0) {
                for (int j = 0; j < 2; ++j) gw[j] -= ys[e] * xs[e][j];
                g0 -= ys[e];
            }
        }
        for (int j = 0; j < 2; ++j) {
            const double g = gw[j] / 2.0 + 2.0 * l2 * w[j];
            vw[j] = cfg.momentum * vw[j] - cfg.rate * g;
            w[j] += vw[j];
        }
        v0 = cfg.momentum * v0 - cfg.rate * (g0 / 2.0);
        w0 += v0;
    }

    const HingeLinear m = train_hinge(view, l2, cfg);
    REQUIRE(m.w[0] == w[0]);
    REQUIRE(m.w[1] == w[1]);
    REQUIRE(m.w0 == w0);
}

TEST_CASE("l2 penalizes the weights but not the bias") {
    const Dataset data = two_blobs(2);
    const BinaryView view = binary_view(data, 1, 0);
    SgdConfig cfg;
    cfg.rate = 0.05;
    cfg.epochs = 100;
    cfg.batch = 15;
    cfg.seed = 3;
    const HingeLinear loose = train_hinge(view, 0.0, cfg);
    const HingeLinear tight = train_hinge(view, 1.0, cfg);
    auto norm2 = [](const std::vector<double>& w) {
        double s = 0.0;
        for (double v : w) s += v * v;
        return s;
    };
    REQUIRE(norm2(tight.w) < norm2(loose.w));

    // hinge_loss includes the penalty term
    HingeLinear probe;
    probe.w = {2.0};
    probe.w0 = 0.0;
    probe.l2 = 0.25;
    Dataset one;
    one.d = 1;
    one.x = {1.0};
    one.y = {1};
    one.n = 1;
    const BinaryView v1 = binary_view(one, 1);
    // margin 2 -> no hinge term; penalty 0.25 * 4
    REQUIRE(hinge_loss(probe, v1) == 1.0);
}

TEST_CASE("hinge separates the blobs and is deterministic") {
    const Dataset data = two_blobs(3);
    const BinaryView view = binary_view(data, 1, 0);
    SgdConfig cfg;
    cfg.rate = 0.05;
    cfg.epochs = 150;
    cfg.batch = 20;
    cfg.seed = 11;
    const HingeLinear a = train_hinge(view, 1e-4, cfg);
    const HingeLinear b = train_hinge(view, 1e-4, cfg);
    REQUIRE(a.w == b.w);
    REQUIRE(a.w0 == b.w0);
    std::size_t errors = 0;
    for (std::size_t i = 0; i < view.size(); ++i)
        errors += a.predict(view.example(i)) != view.label(i);
    REQUIRE(errors == 0);

    Dataset lonely = data;
    for (auto& y : lonely.y) y = 1;
    REQUIRE_THROWS_AS(train_hinge(binary_view(lonely, 1), 0.0, cfg), DataError);
}

TEST_CASE("binary mlp learns the blobs") {
    const Dataset data = two_blobs(4);
    const BinaryView view = binary_view(data, 1, 0);
    SgdConfig cfg;
    cfg.rate = 0.1;
    cfg.epochs = 200;
    cfg.batch = 20;
    cfg.seed = 5;
    const LogisticMlp m = train_mlp(view, {6}, cfg);
    std::size_t errors = 0;
    double total = 0.0;
    for (std::size_t i = 0; i < view.size(); ++i) {
        errors += mlp_predict(m, view.example(i)) != view.label(i);
        total += mlp_loss(m, view.example(i), view.label(i));
    }
    REQUIRE(errors == 0);
    REQUIRE(total / static_cast<double>(view.size()) < 0.35);

    const LogisticMlp again = train_mlp(view, {6}, cfg);
    REQUIRE(m.W == again.W);
    REQUIRE(m.b == again.b);
}

TEST_CASE("softmax head produces a distribution and argmax prediction") {
    const LogisticMlp m = make_mlp({4, 6, 3}, true, 13);
    std::mt19937_64 rng(31);
    const auto x = random_point(4, rng);
    MlpActivations act;
    mlp_forward(m, x.data(), act);
    const auto& p = act.a.back();
    REQUIRE(p.size() == 3);
    double sum = 0.0;
    for (double v : p) {
        REQUIRE(v > 0.0);
        sum += v;
    }
    REQUIRE(std::abs(sum - 1.0) < 1e-12);

    const int cls = mlp_predict_class(m, x.data());
    for (std::size_t c = 0; c < p.size(); ++c)
        REQUIRE(p[static_cast<std::size_t>(cls)] >= p[c]);

    // shifting every output bias by a constant leaves softmax unchanged
    LogisticMlp shifted = m;
    for (double& bias : shifted.b.back()) bias += 37.5;
    MlpActivations act2;
    mlp_forward(shifted, x.data(), act2);
    for (std::size_t c = 0; c < p.size(); ++c)
        REQUIRE(std::abs(act2.a.back()[c] - p[c]) < 1e-12);
}

TEST_CASE("multiclass training fits three clusters") {
    Dataset data;
    data.d = 2;
    auto rng = substream(6, "tri");
    std::uniform_real_distribution<double> jitter(-0.06, 0.06);
    const double cx[3] = {0.2, 0.8, 0.5};
    const double cy[3] = {0.2, 0.3, 0.85};
    for (int c = 0; c < 3; ++c) {
        for (int i = 0; i < 25; ++i) {
            data.x.push_back(cx[c] + jitter(rng));
            data.x.push_back(cy[c] + jitter(rng));
            data.y.push_back(c);
        }
    }
    data.n = 75;

    SgdConfig cfg;
    cfg.rate = 0.2;
    cfg.epochs = 300;
    cfg.batch = 25;
    cfg.seed = 7;
    const LogisticMlp m = train_mlp_multiclass(data, {8}, 3, cfg);
    std::size_t errors = 0;
    for (std::size_t i = 0; i < data.n; ++i)
        errors += mlp_predict_class(m, data.row(i)) != data.y[i];
    REQUIRE(errors == 0);
}

TEST_CASE("sgd config validation") {
    SgdConfig cfg;
    cfg.rate = 0.0;
    REQUIRE_THROWS_AS(cfg.check(), UsageError);
    cfg.rate = 0.1;
    cfg.momentum = 1.0;
    REQUIRE_THROWS_AS(cfg.check(), UsageError);
    cfg.momentum = 0.9;
    cfg.epochs = 0;
    REQUIRE_THROWS_AS(cfg.check(), UsageError);
    cfg.epochs = 1;
    cfg.batch = 0;
    REQUIRE_THROWS_AS(cfg.check(), UsageError);

    REQUIRE_THROWS_AS(make_mlp({4}, false, 0), UsageError);
}
