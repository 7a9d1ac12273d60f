#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "support/oracles.hpp"
#include "zeroone/mlp01.hpp"

using namespace zeroone;

namespace {

// four corner clusters, diagonal pairs share a class (not linearly separable)
Dataset xor_clusters(std::uint64_t seed, int per_cluster = 10) {
    Dataset data;
    data.d = 2;
    auto rng = substream(seed, "xor");
    std::uniform_real_distribution<double> jitter(-0.05, 0.05);
    const double cx[4] = {0.25, 0.75, 0.25, 0.75};
    const double cy[4] = {0.25, 0.75, 0.75, 0.25};
    const int cls[4] = {0, 0, 1, 1};
    for (int c = 0; c < 4; ++c) {
        for (int i = 0; i < per_cluster; ++i) {
            data.x.push_back(cx[c] + jitter(rng));
            data.x.push_back(cy[c] + jitter(rng));
            data.y.push_back(cls[c]);
        }
    }
    data.n = data.y.size();
    return data;
}

// Hand-built two-node solution: node 0 fires on the upper-right cluster,
// node 1 on the lower-left, output is negative iff either fires.
Mlp01Model xor_solution() {
    Mlp01Model m;
    m.d = 2;
    m.k = 2;
    m.W = {1.0, 1.0, -1.0, -1.0};
    m.W0 = {-1.25, 0.75};
    m.w = {-1.0, -1.0};
    m.w0 = -1.5;
    return m;
}

}  // namespace

TEST_CASE("xor clusters are beyond any linear boundary but not this net") {
    const Dataset data = xor_clusters(1);
    const BinaryView view = binary_view(data, 1, 0);

    // exhaustive sweep: the best linear classifier still errs on a quarter
    REQUIRE(oracles::best_linear_2d(view).errors >= data.n / 4);

    // ...while two sign nodes represent the labeling exactly
    const Mlp01Model solution = xor_solution();
    REQUIRE(mlp01_objective(solution, view).loss == 0.0);
}

TEST_CASE("training solves xor for at least one of eight seeds") {
    const Dataset data = xor_clusters(2);
    const BinaryView view = binary_view(data, 1, 0);
    TrainConfig cfg;
    cfg.iterations = 800;
    bool solved = false;
    for (std::uint64_t seed = 0; seed < 8 && !solved; ++seed) {
        cfg.seed = seed;
        const auto [model, trace] = train_mlp01(view, 2, cfg);
        solved = mlp01_objective(model, view).loss == 0.0;
    }
    REQUIRE(solved);
}

TEST_CASE("mlp01 training is deterministic and the best trace is monotone") {
    const Dataset data = xor_clusters(3);
    const BinaryView view = binary_view(data, 1, 0);
    TrainConfig cfg;
    cfg.iterations = 60;
    cfg.seed = 9;
    const auto [m1, t1] = train_mlp01(view, 3, cfg);
    const auto [m2, t2] = train_mlp01(view, 3, cfg);
    REQUIRE(m1.W == m2.W);
    REQUIRE(m1.W0 == m2.W0);
    REQUIRE(m1.w == m2.w);
    REQUIRE(m1.w0 == m2.w0);
    for (std::size_t i = 0; i < t1.records.size(); ++i)
        REQUIRE(t1.records[i].best_full_objective == t2.records[i].best_full_objective);
    for (std::size_t i = 1; i < t1.records.size(); ++i)
        REQUIRE(t1.records[i].best_full_objective <=
                t1.records[i - 1].best_full_objective);
    REQUIRE(mlp01_objective(m1, view).loss == t1.records.back().best_full_objective);
}

TEST_CASE("hidden activations are exactly +-1 and sign(0) counts as +1") {
    Mlp01Model m = xor_solution();
    const double x[2] = {0.5, 0.75};  // node 0 raw: 0.5+0.75-1.25 == 0
    REQUIRE(m.hidden_raw(0, x) == 0.0);
    double h[2];
    m.hidden(x, h);
    REQUIRE(h[0] == 1.0);
    REQUIRE(h[1] == -1.0);
    // raw score assembles w . h + w0
    REQUIRE(m.raw_score(x) == -1.0 * 1.0 + -1.0 * -1.0 + -1.5);
}

TEST_CASE("prediction is constant between the folds of the net") {
    // walk a segment that crosses no node hyperplane: signs cannot change
    const Mlp01Model m = xor_solution();
    const double a[2] = {0.10, 0.05};
    const double b[2] = {0.20, 0.15};
    int h0 = sign_pred(m.hidden_raw(0, a));
    int h1 = sign_pred(m.hidden_raw(1, a));
    const int pred = m.predict(a);
    for (int t = 0; t <= 20; ++t) {
        const double lerp = t / 20.0;
        const double x[2] = {a[0] + lerp * (b[0] - a[0]), a[1] + lerp * (b[1] - a[1])};
        REQUIRE(sign_pred(m.hidden_raw(0, x)) == h0);
        REQUIRE(sign_pred(m.hidden_raw(1, x)) == h1);
        REQUIRE(m.predict(x) == pred);
    }
}

TEST_CASE("hidden node step only accepts end-to-end improvements") {
    const Dataset data = xor_clusters(4, 6);
    const BinaryView view = binary_view(data, 1, 0);
    const SampleSet s = SampleSet::from_view(view);

    // start from the solution with node 0 sabotaged
    Mlp01Model m = xor_solution();
    m.W0[0] = 5.0;  // node 0 always fires, ruining the upper-right cluster
    const double before = mlp01_batch_loss(m, s, false);
    REQUIRE(before > 0.0);

    std::vector<double> h_matrix(s.size() * m.k);
    for (std::size_t i = 0; i < s.size(); ++i)
        m.hidden(s.xs[i], h_matrix.data() + i * m.k);

    auto rng = substream(5, "node-step");
    const bool improved = hidden_node_step(m, 0, s, h_matrix, 2, 0.17, rng, false);
    REQUIRE(improved);
    REQUIRE(mlp01_batch_loss(m, s, false) < before);
}

TEST_CASE("mlp01 validates its inputs") {
    const Dataset data = xor_clusters(5);
    const BinaryView view = binary_view(data, 1, 0);
    TrainConfig cfg;
    cfg.iterations = 5;
    REQUIRE_THROWS_AS(train_mlp01(view, 0, cfg), UsageError);

    Dataset one_class = data;
    for (auto& y : one_class.y) y = 1;
    const BinaryView lonely = binary_view(one_class, 1);
    REQUIRE_THROWS_AS(train_mlp01(lonely, 2, cfg), DataError);
}
