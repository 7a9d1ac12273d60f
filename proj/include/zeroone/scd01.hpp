#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "zeroone/dataset.hpp"
#include "zeroone/zero_one.hpp"

namespace zeroone {

struct TrainConfig {
    std::size_t iterations = 1000;
    double batch_fraction = 0.75;
    double eta = 0.17;
    std::size_t k_features = 64;          // presets 64/128/256; clamped to d
    double balanced_warm_fraction = -1.0; // <0: auto (0.5 when classes beyond 60/40)
    std::uint64_t seed = 0;

    void check() const {
        if (iterations < 1) throw UsageError("iterations >= 1");
        if (!(batch_fraction > 0.0 && batch_fraction <= 1.0))
            throw UsageError("batch_fraction in (0,1]");
        if (!(eta > 0.0)) throw UsageError("eta > 0");
    }
};

struct TraceRecord {
    double batch_objective = 0.0;      // objective the step optimized (balanced in warm phase)
    double best_full_objective = 0.0;  // plain objective of the tracked best, non-increasing
    std::int64_t timestamp_ms = 0;     // kept in memory only; omitted from CSV output
};

struct TrainTrace {
    std::vector<TraceRecord> records;
};

inline double resolve_warm_fraction(const TrainConfig& cfg, const BinaryView& view) {
    if (cfg.balanced_warm_fraction >= 0.0) return cfg.balanced_warm_fraction;
    const double pos = static_cast<double>(view.count_positive());
    const double ratio = pos / static_cast<double>(view.size());
    return (ratio > 0.6 || ratio < 0.4) ? 0.5 : 0.0;
}

inline std::int64_t steady_ms() {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

// Optional per-iteration hook: (iteration, current model, current full-view
// plain objective). Lets callers track extra series (test accuracy sweeps)
// without touching the training path.
using TrainObserver =
    std::function<void(std::size_t, const LinearModel&, double)>;

inline std::pair<LinearModel, TrainTrace> train_scd01(const BinaryView& view,
                                                      const TrainConfig& cfg,
                                                      const TrainObserver& observer = {}) {
    cfg.check();
    const std::size_t n = view.size(), d = view.dim();
    if (n == 0) throw DataError("empty view");
    const std::size_t npos = view.count_positive();
    if (npos == 0 || npos == n) throw DataError("train_scd01 needs both classes");

    // Strict-improvement steps are absorbed at the all-one-class plateau
    // whenever no threshold on the starting direction beats the majority
    // cut: the refit locks onto that cut and no single coordinate nudge
    // escapes it, at any iteration budget. So draw a handful of candidate
    // inits and keep the direction whose refit line search digs deepest,
    // folding orientation ((w, w0) and (-w, -w0) cut the same hyperplane).
    // The drawn w0 is kept as is; only the direction is screened.
    constexpr std::size_t init_draws = 16;
    auto rng_init = substream(cfg.seed, "scd01-init");
    std::normal_distribution<double> normal(0.0, 1.0);
    LinearModel m;
    m.w.resize(d);
    std::vector<std::int8_t> ys(n);
    for (std::size_t i = 0; i < n; ++i) ys[i] = static_cast<std::int8_t>(view.label(i));
    const CostVector init_cost = CostVector::plain(ys);
    std::int64_t init_best = -1;
    std::vector<double> cand_w(d), cand_p(n);
    for (std::size_t t = 0; t < init_draws; ++t) {
        for (double& wj : cand_w) wj = normal(rng_init);
        const double cand_w0 = normal(rng_init);
        for (std::size_t i = 0; i < n; ++i) {
            double p = 0.0;
            const double* x = view.example(i);
            for (std::size_t j = 0; j < d; ++j) p += cand_w[j] * x[j];
            cand_p[i] = p;
        }
        const std::int64_t fwd = optimal_threshold_core(cand_p, init_cost).cost;
        for (double& p : cand_p) p = -p;
        const std::int64_t rev = optimal_threshold_core(cand_p, init_cost).cost;
        const bool flip = rev < fwd;
        const std::int64_t depth = flip ? rev : fwd;
        if (init_best < 0 || depth < init_best) {
            init_best = depth;
            const double sgn = flip ? -1.0 : 1.0;
            for (std::size_t j = 0; j < d; ++j) m.w[j] = sgn * cand_w[j];
            m.w0 = sgn * cand_w0;
        }
    }

    auto rng_batch = substream(cfg.seed, "scd01-batch");
    auto rng_feat = substream(cfg.seed, "scd01-features");
    const std::size_t k = std::min(cfg.k_features, d);
    const std::size_t warm_iters = static_cast<std::size_t>(
        std::llround(resolve_warm_fraction(cfg, view) *
                     static_cast<double>(cfg.iterations)));

    // Full-view projections maintained incrementally: one coordinate moves
    // per accepted step.
    std::vector<double> p_full(n);
    for (std::size_t i = 0; i < n; ++i) {
        double p = 0.0;
        const double* x = view.example(i);
        for (std::size_t j = 0; j < d; ++j) p += m.w[j] * x[j];
        p_full[i] = p;
    }
    auto full_plain_loss = [&]() {
        std::size_t errs = 0;
        for (std::size_t i = 0; i < n; ++i)
            errs += (sign_pred(p_full[i] + m.w0) != view.label(i));
        return static_cast<double>(errs) / static_cast<double>(n);
    };

    LinearModel best = m;
    double best_obj = full_plain_loss();
    TrainTrace trace;
    trace.records.reserve(cfg.iterations);

    std::vector<std::uint32_t> batch;
    std::vector<double> proj_b;
    for (std::size_t it = 0; it < cfg.iterations; ++it) {
        const bool balanced_now = it < warm_iters;
        batch = stratified_batch(view, cfg.batch_fraction, rng_batch);
        SampleSet s = SampleSet::from_view(view, batch);
        proj_b.resize(batch.size());
        for (std::size_t i = 0; i < batch.size(); ++i) proj_b[i] = p_full[batch[i]];

        const std::vector<double> w_before = m.w;
        if (coordinate_step(m, s, proj_b, k, cfg.eta, rng_feat, balanced_now)) {
            // Replay the single changed coordinate onto the full projections.
            for (std::size_t j = 0; j < d; ++j) {
                const double delta = m.w[j] - w_before[j];
                if (delta != 0.0) {
                    for (std::size_t i = 0; i < n; ++i)
                        p_full[i] += delta * view.example(i)[j];
                    break;
                }
            }
        }

        const CostVector bc = CostVector::make(s.ys, balanced_now);
        const double batch_loss =
            static_cast<double>(cost_at(bc, proj_b, m.w0)) / bc.denom;
        const double full = full_plain_loss();
        if (full < best_obj) {
            best_obj = full;
            best = m;
        }
        trace.records.push_back({batch_loss, best_obj, steady_ms()});
        if (observer) observer(it, m, full);
    }
    return {best, trace};
}

}  // namespace zeroone
