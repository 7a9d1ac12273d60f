#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "zeroone/dataset.hpp"
#include "zeroone/scd01.hpp"
#include "zeroone/zero_one.hpp"

namespace zeroone {

// Dual-layer network with sign activations: prediction is
// sign(w . sign(Wx + W0) + w0). Hidden weights stored node-major: node j owns
// W[j*d .. j*d+d).
struct Mlp01Model {
    std::size_t d = 0;
    std::size_t k = 0;
    std::vector<double> W;   // k*d
    std::vector<double> W0;  // k
    std::vector<double> w;   // k
    double w0 = 0.0;

    const double* node(std::size_t j) const { return W.data() + j * d; }
    double* node(std::size_t j) { return W.data() + j * d; }

    double hidden_raw(std::size_t j, const double* x) const {
        double s = W0[j];
        const double* wj = node(j);
        for (std::size_t c = 0; c < d; ++c) s += wj[c] * x[c];
        return s;
    }

    void hidden(const double* x, double* h) const {
        for (std::size_t j = 0; j < k; ++j) h[j] = sign_pred(hidden_raw(j, x));
    }

    double raw_score(const double* x) const {
        double s = w0;
        for (std::size_t j = 0; j < k; ++j)
            s += w[j] * sign_pred(hidden_raw(j, x));
        return s;
    }

    int predict(const double* x) const { return sign_pred(raw_score(x)); }
};

inline double mlp01_batch_loss(const Mlp01Model& m, const SampleSet& s,
                               bool balanced) {
    const CostVector c = CostVector::make(s.ys, balanced);
    std::int64_t total = 0;
    for (std::size_t i = 0; i < s.size(); ++i)
        total += (m.predict(s.xs[i]) > 0) ? c.as_pos[i] : c.as_neg[i];
    return static_cast<double>(total) / c.denom;
}

inline ObjectiveValue mlp01_objective(const Mlp01Model& m, const BinaryView& view,
                                      bool balanced = false) {
    std::size_t err_pos = 0, err_neg = 0, npos = 0;
    for (std::size_t i = 0; i < view.size(); ++i) {
        const int y = view.label(i);
        npos += (y > 0);
        if (m.predict(view.example(i)) != y) (y > 0 ? err_pos : err_neg)++;
    }
    return objective_from_counts(err_pos, npos, err_neg, view.size() - npos, balanced);
}

// Hidden-node coordinate update. Candidates W[j][c] +- eta for k_features
// random input coordinates; each candidate re-fits the node threshold W0[j]
// by the weighted line search where the per-example costs are the end-to-end
// errors with that node forced to +1 or -1. Acceptance is strict improvement
// of the end-to-end batch cost.
inline bool hidden_node_step(Mlp01Model& m, std::size_t j, const SampleSet& s,
                             const std::vector<double>& h_matrix,  // b x k
                             std::size_t k_features, double eta,
                             std::mt19937_64& rng, bool balanced) {
    const std::size_t b = s.size(), d = s.d;
    const CostVector unit = CostVector::make(s.ys, balanced);

    // s_other = output score with node j's contribution removed.
    std::vector<std::int64_t> cost_plus(b), cost_minus(b);
    std::vector<double> q(b);  // node pre-activations
    std::int64_t current = 0;
    for (std::size_t i = 0; i < b; ++i) {
        const double* h = h_matrix.data() + i * m.k;
        double out = m.w0;
        for (std::size_t t = 0; t < m.k; ++t) out += m.w[t] * h[t];
        const double s_other = out - m.w[j] * h[j];
        const int y = s.ys[i];
        const std::int64_t unit_cost = (y > 0) ? unit.as_neg[i] : unit.as_pos[i];
        cost_plus[i] = (sign_pred(s_other + m.w[j]) != y) ? unit_cost : 0;
        cost_minus[i] = (sign_pred(s_other - m.w[j]) != y) ? unit_cost : 0;
        q[i] = m.hidden_raw(j, s.xs[i]) - m.W0[j];
        current += (sign_pred(out) != y) ? unit_cost : 0;
    }
    CostVector node_cost;
    node_cost.as_pos = std::move(cost_plus);
    node_cost.as_neg = std::move(cost_minus);
    node_cost.denom = unit.denom;

    std::vector<std::uint32_t> coords(d);
    for (std::size_t c = 0; c < d; ++c) coords[c] = static_cast<std::uint32_t>(c);
    const std::size_t kf = std::min(k_features, d);
    for (std::size_t c = 0; c < kf; ++c) {
        std::uniform_int_distribution<std::size_t> pick(c, coords.size() - 1);
        std::swap(coords[c], coords[pick(rng)]);
    }
    coords.resize(kf);
    std::sort(coords.begin(), coords.end());

    std::int64_t best_cost = current;
    std::uint32_t best_c = 0;
    double best_delta = 0.0, best_t = 0.0;
    bool improved = false;
    std::vector<double> cand(b);
    for (std::uint32_t c : coords) {
        for (const double delta : {+eta, -eta}) {
            for (std::size_t i = 0; i < b; ++i)
                cand[i] = q[i] + delta * s.xs[i][c];
            const ThresholdResult r = optimal_threshold_core(cand, node_cost);
            if (r.cost < best_cost) {
                best_cost = r.cost;
                best_c = c;
                best_delta = delta;
                best_t = r.w0;
                improved = true;
            }
        }
    }
    if (improved) {
        m.node(j)[best_c] += best_delta;
        m.W0[j] = best_t;
    }
    return improved;
}

inline std::pair<Mlp01Model, TrainTrace> train_mlp01(const BinaryView& view,
                                                     std::size_t hidden,
                                                     const TrainConfig& cfg) {
    cfg.check();
    if (hidden < 1) throw UsageError("hidden >= 1");
    const std::size_t n = view.size(), d = view.dim();
    if (n == 0) throw DataError("empty view");
    const std::size_t npos = view.count_positive();
    if (npos == 0 || npos == n) throw DataError("train_mlp01 needs both classes");

    auto rng_init = substream(cfg.seed, "mlp01-init");
    std::normal_distribution<double> normal(0.0, 1.0);
    Mlp01Model m;
    m.d = d;
    m.k = hidden;
    m.W.resize(hidden * d);
    m.W0.resize(hidden);
    m.w.resize(hidden);
    for (double& v : m.W) v = normal(rng_init);
    for (double& v : m.W0) v = normal(rng_init);
    for (double& v : m.w) v = normal(rng_init);
    m.w0 = normal(rng_init);

    // Orientation guard: flipping the output node (w, w0) flips every
    // prediction, and a wrong-way start is absorbing for strict-improvement
    // steps (the threshold refit locks onto the all-one-class cut). Keep
    // the better-scoring side.
    {
        std::size_t errs = 0, errs_flip = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const int y = view.label(i);
            double raw = m.w0;
            const double* x = view.example(i);
            for (std::size_t j = 0; j < hidden; ++j)
                raw += m.w[j] * sign_pred(m.hidden_raw(j, x));
            errs += (sign_pred(raw) != y);
            errs_flip += (sign_pred(-raw) != y);
        }
        if (errs_flip < errs) {
            for (double& v : m.w) v = -v;
            m.w0 = -m.w0;
        }
    }

    auto rng_batch = substream(cfg.seed, "mlp01-batch");
    auto rng_feat = substream(cfg.seed, "mlp01-features");
    auto rng_node = substream(cfg.seed, "mlp01-node");
    const std::size_t warm_iters = static_cast<std::size_t>(
        std::llround(resolve_warm_fraction(cfg, view) *
                     static_cast<double>(cfg.iterations)));

    Mlp01Model best = m;
    double best_obj = mlp01_objective(m, view).loss;
    TrainTrace trace;
    trace.records.reserve(cfg.iterations);

    std::vector<double> h_matrix;
    std::vector<double> out_proj;
    for (std::size_t it = 0; it < cfg.iterations; ++it) {
        const bool balanced_now = it < warm_iters;
        const auto batch = stratified_batch(view, cfg.batch_fraction, rng_batch);
        SampleSet s = SampleSet::from_view(view, batch);
        const std::size_t b = s.size();

        h_matrix.resize(b * hidden);
        for (std::size_t i = 0; i < b; ++i)
            m.hidden(s.xs[i], h_matrix.data() + i * hidden);

        // (a) output node over hidden activations.
        SampleSet sh;
        sh.d = hidden;
        sh.ys = s.ys;
        sh.xs.reserve(b);
        for (std::size_t i = 0; i < b; ++i)
            sh.xs.push_back(h_matrix.data() + i * hidden);
        LinearModel out_node{m.w, m.w0};
        out_proj.resize(b);
        for (std::size_t i = 0; i < b; ++i) {
            double p = 0.0;
            const double* h = sh.xs[i];
            for (std::size_t t = 0; t < hidden; ++t) p += out_node.w[t] * h[t];
            out_proj[i] = p;
        }
        coordinate_step(out_node, sh, out_proj, std::min(cfg.k_features, hidden),
                        cfg.eta, rng_feat, balanced_now);
        m.w = out_node.w;
        m.w0 = out_node.w0;

        // (b) one random hidden node.
        std::uniform_int_distribution<std::size_t> pick_node(0, hidden - 1);
        const std::size_t j = pick_node(rng_node);
        hidden_node_step(m, j, s, h_matrix, cfg.k_features, cfg.eta, rng_feat,
                         balanced_now);

        const double batch_loss = mlp01_batch_loss(m, s, balanced_now);
        const double full = mlp01_objective(m, view).loss;
        if (full < best_obj) {
            best_obj = full;
            best = m;
        }
        trace.records.push_back({batch_loss, best_obj, steady_ms()});
    }
    return {best, trace};
}

}  // namespace zeroone
