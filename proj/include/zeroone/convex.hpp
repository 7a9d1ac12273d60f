#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "zeroone/dataset.hpp"
#include "zeroone/rng.hpp"
#include "zeroone/zero_one.hpp"

namespace zeroone {

struct SgdConfig {
    std::size_t batch = 200;
    double momentum = 0.9;
    double rate = 0.01;
    std::size_t epochs = 50;
    std::uint64_t seed = 0;

    void check() const {
        if (!(rate > 0.0)) throw UsageError("learning rate > 0");
        if (!(momentum >= 0.0 && momentum < 1.0)) throw UsageError("momentum in [0,1)");
        if (batch < 1 || epochs < 1) throw UsageError("batch and epochs >= 1");
    }
};

struct HingeLinear {
    std::vector<double> w;
    double w0 = 0.0;
    double l2 = 0.0;

    int predict(const double* x) const {
        double s = w0;
        for (std::size_t j = 0; j < w.size(); ++j) s += w[j] * x[j];
        return sign_pred(s);
    }
    double margin(const double* x, int y) const {
        double s = w0;
        for (std::size_t j = 0; j < w.size(); ++j) s += w[j] * x[j];
        return y * s;
    }
};

inline double hinge_loss(const HingeLinear& m, const BinaryView& view) {
    double total = 0.0;
    for (std::size_t i = 0; i < view.size(); ++i)
        total += std::max(0.0, 1.0 - m.margin(view.example(i), view.label(i)));
    double reg = 0.0;
    for (double wj : m.w) reg += wj * wj;
    return total / static_cast<double>(view.size()) + m.l2 * reg;
}

// Mini-batch subgradient descent with classical momentum
// (v <- momentum*v - rate*grad). l2 applies to w only, not w0.
inline HingeLinear train_hinge(const BinaryView& view, double l2,
                               const SgdConfig& cfg) {
    cfg.check();
    const std::size_t n = view.size(), d = view.dim();
    if (n == 0) throw DataError("empty view");
    const std::size_t npos = view.count_positive();
    if (npos == 0 || npos == n) throw DataError("train_hinge needs both classes");

    auto rng = substream(cfg.seed, "hinge-init");
    std::normal_distribution<double> normal(0.0, 1.0);
    HingeLinear m;
    m.l2 = l2;
    m.w.resize(d);
    const double scale = 1.0 / std::sqrt(static_cast<double>(d));
    for (double& wj : m.w) wj = normal(rng) * scale;

    auto rng_shuffle = substream(cfg.seed, "hinge-shuffle");
    std::vector<std::uint32_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0u);
    std::vector<double> vw(d, 0.0), gw(d);
    double v0 = 0.0;
    for (std::size_t ep = 0; ep < cfg.epochs; ++ep) {
        std::shuffle(idx.begin(), idx.end(), rng_shuffle);
        for (std::size_t start = 0; start < n; start += cfg.batch) {
            const std::size_t stop = std::min(n, start + cfg.batch);
            const double bs = static_cast<double>(stop - start);
            std::fill(gw.begin(), gw.end(), 0.0);
            double g0 = 0.0;
            for (std::size_t t = start; t < stop; ++t) {
                const std::uint32_t i = idx[t];
                const double* x = view.example(i);
                const int y = view.label(i);
                if (m.margin(x, y) < 1.0) {
                    for (std::size_t j = 0; j < d; ++j) gw[j] -= y * x[j];
                    g0 -= y;
                }
            }
            for (std::size_t j = 0; j < d; ++j) {
                const double g = gw[j] / bs + 2.0 * l2 * m.w[j];
                vw[j] = cfg.momentum * vw[j] - cfg.rate * g;
                m.w[j] += vw[j];
            }
            v0 = cfg.momentum * v0 - cfg.rate * (g0 / bs);
            m.w0 += v0;
        }
    }
    return m;
}

// Logistic-activation MLP. Hidden layers are sigmoid; output is a single
// logistic unit (binary) or softmax (multiclass). Backprop returns exact
// parameter gradients and the input gradient (FGSM needs the latter).
struct LogisticMlp {
    std::vector<std::size_t> sizes;        // input, hidden..., output
    std::vector<std::vector<double>> W;    // per layer, out x in row-major
    std::vector<std::vector<double>> b;    // per layer
    bool multiclass = false;

    std::size_t layers() const { return W.size(); }
    std::size_t in_dim() const { return sizes.front(); }
    std::size_t out_dim() const { return sizes.back(); }
};

inline LogisticMlp make_mlp(const std::vector<std::size_t>& sizes, bool multiclass,
                            std::uint64_t seed) {
    if (sizes.size() < 2) throw UsageError("mlp needs input and output sizes");
    LogisticMlp m;
    m.sizes = sizes;
    m.multiclass = multiclass;
    auto rng = substream(seed, "mlp-init");
    std::normal_distribution<double> normal(0.0, 1.0);
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
        const std::size_t in = sizes[l], out = sizes[l + 1];
        std::vector<double> w(out * in);
        const double scale = 1.0 / std::sqrt(static_cast<double>(in));
        for (double& v : w) v = normal(rng) * scale;
        m.W.push_back(std::move(w));
        m.b.emplace_back(out, 0.0);
    }
    return m;
}

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

struct MlpActivations {
    std::vector<std::vector<double>> a;  // a[0] = input copy, a[L] = output
};

inline void mlp_forward(const LogisticMlp& m, const double* x, MlpActivations& act) {
    act.a.resize(m.layers() + 1);
    act.a[0].assign(x, x + m.in_dim());
    for (std::size_t l = 0; l < m.layers(); ++l) {
        const std::size_t in = m.sizes[l], out = m.sizes[l + 1];
        act.a[l + 1].resize(out);
        const bool last = (l + 1 == m.layers());
        for (std::size_t o = 0; o < out; ++o) {
            double z = m.b[l][o];
            const double* wr = m.W[l].data() + o * in;
            for (std::size_t i = 0; i < in; ++i) z += wr[i] * act.a[l][i];
            act.a[l + 1][o] = (last && m.multiclass) ? z : sigmoid(z);
        }
        if (last && m.multiclass) {
            // softmax over raw scores
            double mx = act.a[l + 1][0];
            for (double v : act.a[l + 1]) mx = std::max(mx, v);
            double sum = 0.0;
            for (double& v : act.a[l + 1]) {
                v = std::exp(v - mx);
                sum += v;
            }
            for (double& v : act.a[l + 1]) v /= sum;
        }
    }
}

// Probability of the positive class (binary models).
inline double mlp_prob(const LogisticMlp& m, const double* x) {
    MlpActivations act;
    mlp_forward(m, x, act);
    return act.a.back()[0];
}

inline int mlp_predict(const LogisticMlp& m, const double* x) {
    return mlp_prob(m, x) >= 0.5 ? 1 : -1;
}

inline int mlp_predict_class(const LogisticMlp& m, const double* x) {
    MlpActivations act;
    mlp_forward(m, x, act);
    const auto& p = act.a.back();
    std::size_t best = 0;
    for (std::size_t c = 1; c < p.size(); ++c)
        if (p[c] > p[best]) best = c;
    return static_cast<int>(best);
}

struct MlpGradients {
    std::vector<std::vector<double>> gW;
    std::vector<std::vector<double>> gb;
    std::vector<double> gx;
};

// Cross-entropy gradients. Binary target t in {0,1} from label y in {-1,+1};
// multiclass target is the class id. Output deltas are (p - t) for both
// heads, which makes the chain rule identical.
inline void mlp_backward(const LogisticMlp& m, const MlpActivations& act, int target,
                         MlpGradients& g) {
    const std::size_t L = m.layers();
    g.gW.resize(L);
    g.gb.resize(L);
    std::vector<double> delta = act.a[L];
    if (m.multiclass) {
        delta[static_cast<std::size_t>(target)] -= 1.0;
    } else {
        delta[0] -= (target > 0) ? 1.0 : 0.0;
    }
    for (std::size_t l = L; l-- > 0;) {
        const std::size_t in = m.sizes[l], out = m.sizes[l + 1];
        g.gW[l].assign(out * in, 0.0);
        g.gb[l] = delta;
        for (std::size_t o = 0; o < out; ++o) {
            double* gr = g.gW[l].data() + o * in;
            const double dl = delta[o];
            for (std::size_t i = 0; i < in; ++i) gr[i] = dl * act.a[l][i];
        }
        std::vector<double> prev(in, 0.0);
        for (std::size_t o = 0; o < out; ++o) {
            const double* wr = m.W[l].data() + o * in;
            const double dl = delta[o];
            for (std::size_t i = 0; i < in; ++i) prev[i] += dl * wr[i];
        }
        if (l > 0) {
            for (std::size_t i = 0; i < in; ++i) {
                const double a = act.a[l][i];
                prev[i] *= a * (1.0 - a);  // sigmoid derivative
            }
        }
        delta = std::move(prev);
    }
    g.gx = std::move(delta);
}

inline double mlp_loss(const LogisticMlp& m, const double* x, int target) {
    MlpActivations act;
    mlp_forward(m, x, act);
    const double eps = 1e-12;
    if (m.multiclass)
        return -std::log(std::max(act.a.back()[static_cast<std::size_t>(target)], eps));
    const double p = act.a.back()[0];
    return (target > 0) ? -std::log(std::max(p, eps))
                        : -std::log(std::max(1.0 - p, eps));
}

namespace detail {

template <typename ExampleAt>
LogisticMlp train_mlp_impl(std::size_t n, ExampleAt example_at, LogisticMlp m,
                           const SgdConfig& cfg) {
    auto rng_shuffle = substream(cfg.seed, "mlp-shuffle");
    std::vector<std::uint32_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0u);
    std::vector<std::vector<double>> vW, vb, aW, ab;
    for (std::size_t l = 0; l < m.layers(); ++l) {
        vW.emplace_back(m.W[l].size(), 0.0);
        vb.emplace_back(m.b[l].size(), 0.0);
        aW.emplace_back(m.W[l].size(), 0.0);
        ab.emplace_back(m.b[l].size(), 0.0);
    }
    MlpActivations act;
    MlpGradients g;
    for (std::size_t ep = 0; ep < cfg.epochs; ++ep) {
        std::shuffle(idx.begin(), idx.end(), rng_shuffle);
        for (std::size_t start = 0; start < n; start += cfg.batch) {
            const std::size_t stop = std::min(n, start + cfg.batch);
            const double bs = static_cast<double>(stop - start);
            for (std::size_t l = 0; l < m.layers(); ++l) {
                std::fill(aW[l].begin(), aW[l].end(), 0.0);
                std::fill(ab[l].begin(), ab[l].end(), 0.0);
            }
            for (std::size_t t = start; t < stop; ++t) {
                const auto [x, target] = example_at(idx[t]);
                mlp_forward(m, x, act);
                mlp_backward(m, act, target, g);
                for (std::size_t l = 0; l < m.layers(); ++l) {
                    for (std::size_t j = 0; j < aW[l].size(); ++j)
                        aW[l][j] += g.gW[l][j];
                    for (std::size_t j = 0; j < ab[l].size(); ++j)
                        ab[l][j] += g.gb[l][j];
                }
            }
            for (std::size_t l = 0; l < m.layers(); ++l) {
                for (std::size_t j = 0; j < aW[l].size(); ++j) {
                    vW[l][j] = cfg.momentum * vW[l][j] - cfg.rate * (aW[l][j] / bs);
                    m.W[l][j] += vW[l][j];
                }
                for (std::size_t j = 0; j < ab[l].size(); ++j) {
                    vb[l][j] = cfg.momentum * vb[l][j] - cfg.rate * (ab[l][j] / bs);
                    m.b[l][j] += vb[l][j];
                }
            }
        }
    }
    return m;
}

}  // namespace detail

inline LogisticMlp train_mlp(const BinaryView& view,
                             const std::vector<std::size_t>& hidden,
                             const SgdConfig& cfg) {
    cfg.check();
    if (view.size() == 0) throw DataError("empty view");
    std::vector<std::size_t> sizes{view.dim()};
    sizes.insert(sizes.end(), hidden.begin(), hidden.end());
    sizes.push_back(1);
    LogisticMlp m = make_mlp(sizes, false, cfg.seed);
    return detail::train_mlp_impl(
        view.size(),
        [&](std::uint32_t i) {
            return std::pair<const double*, int>(view.example(i), view.label(i));
        },
        std::move(m), cfg);
}

inline LogisticMlp train_mlp_multiclass(const Dataset& data,
                                        const std::vector<std::size_t>& hidden,
                                        std::size_t classes, const SgdConfig& cfg) {
    cfg.check();
    data.check();
    std::vector<std::size_t> sizes{data.d};
    sizes.insert(sizes.end(), hidden.begin(), hidden.end());
    sizes.push_back(classes);
    LogisticMlp m = make_mlp(sizes, true, cfg.seed);
    return detail::train_mlp_impl(
        data.n,
        [&](std::uint32_t i) {
            return std::pair<const double*, int>(data.row(i), data.y[i]);
        },
        std::move(m), cfg);
}

}  // namespace zeroone
