#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "zeroone/convex.hpp"
#include "zeroone/mlp01.hpp"
#include "zeroone/zero_one.hpp"

namespace zeroone {

struct AttackConfig {
    double epsilon = 0.0;
    bool clip = true;  // clamp perturbed points to [0,1]

    void check() const {
        if (!(epsilon >= 0.0) || !std::isfinite(epsilon))
            throw UsageError("epsilon must be finite and >= 0");
    }
};

// Attack directions use sign(0)=0: a zero coordinate moves nothing. This is
// intentionally different from the prediction convention sign(0)=+1.
inline double dir_sign(double v) { return (v > 0.0) - (v < 0.0); }

inline void clip01(std::vector<double>& x) {
    for (double& v : x) v = std::min(1.0, std::max(0.0, v));
}

inline std::vector<double> attack_linear(const std::vector<double>& w, const double* x,
                                         int y, const AttackConfig& cfg) {
    cfg.check();
    std::vector<double> out(w.size());
    for (std::size_t j = 0; j < w.size(); ++j)
        out[j] = x[j] + cfg.epsilon * (-y) * dir_sign(w[j]);
    if (cfg.clip) clip01(out);
    return out;
}

inline std::vector<double> attack_linear(const LinearModel& m, const double* x, int y,
                                         const AttackConfig& cfg) {
    return attack_linear(m.w, x, y, cfg);
}

inline std::vector<double> attack_linear(const HingeLinear& m, const double* x, int y,
                                         const AttackConfig& cfg) {
    return attack_linear(m.w, x, y, cfg);
}

inline std::vector<double> attack_fgsm(const LogisticMlp& m, const double* x, int y,
                                       const AttackConfig& cfg) {
    cfg.check();
    MlpActivations act;
    MlpGradients g;
    mlp_forward(m, x, act);
    mlp_backward(m, act, y, g);
    std::vector<double> out(m.in_dim());
    for (std::size_t j = 0; j < out.size(); ++j)
        out[j] = x[j] + cfg.epsilon * dir_sign(g.gx[j]);
    if (cfg.clip) clip01(out);
    return out;
}

namespace detail {

inline std::vector<double> node_distortion(const Mlp01Model& m, const double* x,
                                           std::size_t node, const AttackConfig& cfg) {
    const int yprime = sign_pred(m.hidden_raw(node, x));
    const double* wk = m.node(node);
    std::vector<double> out(m.d);
    for (std::size_t j = 0; j < m.d; ++j)
        out[j] = x[j] + cfg.epsilon * (-yprime) * dir_sign(wk[j]);
    if (cfg.clip) clip01(out);
    return out;
}

}  // namespace detail

// Flip-one-node attack: push x across the half-space of a single hidden node.
// Already-misclassified inputs get a random node; otherwise the nodes are
// scanned in index order and the first distortion that fools the final output
// wins, falling back to a random node when none does.
inline std::vector<double> attack_mlp01(const Mlp01Model& m, const double* x, int y,
                                        const AttackConfig& cfg, std::mt19937_64& rng) {
    cfg.check();
    if (m.predict(x) != y) {
        std::uniform_int_distribution<std::size_t> pick(0, m.k - 1);
        return detail::node_distortion(m, x, pick(rng), cfg);
    }
    for (std::size_t k = 0; k < m.k; ++k) {
        std::vector<double> cand = detail::node_distortion(m, x, k, cfg);
        if (m.predict(cand.data()) != y) return cand;
    }
    std::uniform_int_distribution<std::size_t> pick(0, m.k - 1);
    return detail::node_distortion(m, x, pick(rng), cfg);
}

// Type-erased hooks so transfer matrices and black-box loops can mix model
// families. An Adversary maps (x, true label) to a perturbed copy of x.
using Predictor = std::function<int(const double*)>;
using Adversary = std::function<std::vector<double>(const double*, int)>;

struct AdversarialBatch {
    std::size_t n = 0, d = 0;
    std::vector<double> original;   // n x d
    std::vector<double> perturbed;  // n x d
    std::vector<int> labels;
    std::vector<int> source_pred;  // source model's call on each perturbed row
};

inline AdversarialBatch make_adversarial_batch(const Adversary& adv,
                                               const Predictor& source,
                                               const BinaryView& view) {
    AdversarialBatch b;
    b.n = view.size();
    b.d = view.dim();
    b.original.reserve(b.n * b.d);
    b.perturbed.reserve(b.n * b.d);
    for (std::size_t i = 0; i < b.n; ++i) {
        const double* x = view.example(i);
        b.original.insert(b.original.end(), x, x + b.d);
        std::vector<double> xp = adv(x, view.label(i));
        b.source_pred.push_back(source(xp.data()));
        b.perturbed.insert(b.perturbed.end(), xp.begin(), xp.end());
        b.labels.push_back(view.label(i));
    }
    return b;
}

inline double accuracy(const Predictor& model, const BinaryView& view) {
    if (view.size() == 0) throw DataError("empty view");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < view.size(); ++i)
        hits += model(view.example(i)) == view.label(i);
    return static_cast<double>(hits) / static_cast<double>(view.size());
}

// Accuracy of `target` on adversaries generated against `source`'s view of
// the same examples.
inline double evaluate_attack(const Adversary& source_attack, const Predictor& target,
                              const BinaryView& view) {
    if (view.size() == 0) throw DataError("empty view");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < view.size(); ++i) {
        std::vector<double> xp = source_attack(view.example(i), view.label(i));
        hits += target(xp.data()) == view.label(i);
    }
    return static_cast<double>(hits) / static_cast<double>(view.size());
}

}  // namespace zeroone
