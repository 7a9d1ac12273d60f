#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "zeroone/attacks.hpp"
#include "zeroone/convex.hpp"
#include "zeroone/dataset.hpp"
#include "zeroone/rng.hpp"
#include "zeroone/scd01.hpp"
#include "zeroone/zero_one.hpp"

namespace zeroone {

// Label-only boundary around the attacked model. Substitute training sees
// this and nothing else; parameters and confidences never cross it. The
// counter records attacker queries (seed set + augmentation labels).
struct TargetOracle {
    Predictor label_fn;
    std::size_t dim = 0;
    mutable std::uint64_t queries = 0;

    int label(const double* x) const {
        ++queries;
        return label_fn(x);
    }
};

struct BlackBoxConfig {
    std::vector<std::size_t> substitute_hidden = {200, 200};
    std::size_t epochs = 20;
    std::size_t seed_set = 150;
    double epsilon = 0.0625;
    double augment_step = -1.0;     // < 0: use epsilon
    std::size_t augment_batch = 0;  // 0: use seed_set
    SgdConfig inner;                // per-epoch substitute fine-tuning
    TrainConfig scd01_inner;        // for the SCD01-substitute variant
    std::uint64_t seed = 0;

    void check() const {
        if (epochs < 1) throw UsageError("epochs >= 1");
        if (seed_set < 2) throw UsageError("seed set too small");
        if (!(epsilon >= 0.0)) throw UsageError("epsilon >= 0");
    }
    double step() const { return augment_step < 0.0 ? epsilon : augment_step; }
    std::size_t batch() const { return augment_batch == 0 ? seed_set : augment_batch; }
};

struct BlackBoxRecord {
    std::size_t epoch = 0;
    double target_adv_accuracy = 0.0;  // epoch 0: clean test accuracy
    double clean_match = 0.0;
    double adv_match = 0.0;
    std::uint64_t queries = 0;
};

struct BlackBoxTrace {
    std::vector<BlackBoxRecord> records;
};

inline double label_match_rate(const Predictor& a, const Predictor& b,
                               const BinaryView& view) {
    if (view.size() == 0) throw DataError("empty view");
    std::size_t same = 0;
    for (std::size_t i = 0; i < view.size(); ++i) {
        const double* x = view.example(i);
        same += a(x) == b(x);
    }
    return static_cast<double>(same) / static_cast<double>(view.size());
}

namespace detail {

// Attacker's training pool: rows + oracle labels, grown each epoch.
struct Pool {
    std::size_t d = 0;
    std::vector<double> x;
    std::vector<int> y;

    std::size_t size() const { return y.size(); }
    const double* row(std::size_t i) const { return x.data() + i * d; }
    void add(const double* row_in, int label) {
        x.insert(x.end(), row_in, row_in + d);
        y.push_back(label);
    }
};

// Round-robin over the true classes so any seed-set size stays stratified.
inline Pool seed_pool(const TargetOracle& oracle, const BinaryView& held_out,
                      std::size_t want, std::uint64_t seed) {
    if (held_out.size() == 0) throw DataError("empty seed source");
    if (want > held_out.size())
        throw UsageError("seed set larger than held-out data");
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < held_out.size(); ++i)
        (held_out.label(i) > 0 ? pos : neg).push_back(i);
    auto rng = substream(seed, "seed-set");
    std::shuffle(pos.begin(), pos.end(), rng);
    std::shuffle(neg.begin(), neg.end(), rng);
    Pool pool;
    pool.d = held_out.dim();
    std::size_t ip = 0, in = 0;
    for (std::size_t i = 0; i < want; ++i) {
        const bool take_pos = (i % 2 == 0) ? ip < pos.size() : in >= neg.size();
        const std::size_t row = take_pos ? pos[ip++] : neg[in++];
        const double* x = held_out.example(row);
        pool.add(x, oracle.label(x));
    }
    return pool;
}

// Perturb a without-replacement sample of the pool, label via the oracle,
// append. Growth per epoch is exactly cfg.batch().
template <typename PerturbFn>
void augment_pool(Pool& pool, const TargetOracle& oracle, const BlackBoxConfig& cfg,
                  std::uint64_t epoch, PerturbFn perturb) {
    const std::size_t batch = std::min(cfg.batch(), pool.size());
    auto rng = substream(cfg.seed, "augment-pick", epoch);
    std::vector<std::size_t> idx(pool.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < batch; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, idx.size() - 1);
        std::swap(idx[i], idx[pick(rng)]);
    }
    std::vector<std::vector<double>> fresh;
    fresh.reserve(batch);
    for (std::size_t i = 0; i < batch; ++i)
        fresh.push_back(perturb(pool.row(idx[i]), pool.y[idx[i]]));
    for (const auto& x : fresh) pool.add(x.data(), oracle.label(x.data()));
}

inline double adversarial_accuracy(const Adversary& attack, const Predictor& target,
                                   const Predictor& substitute, const BinaryView& test,
                                   double& adv_match_out) {
    std::size_t hits = 0, same = 0;
    for (std::size_t i = 0; i < test.size(); ++i) {
        const std::vector<double> xp = attack(test.example(i), test.label(i));
        const int t = target(xp.data());
        hits += t == test.label(i);
        same += t == substitute(xp.data());
    }
    adv_match_out = static_cast<double>(same) / static_cast<double>(test.size());
    return static_cast<double>(hits) / static_cast<double>(test.size());
}

template <typename TrainEpochFn, typename SubstitutePredictor, typename AttackFn>
BlackBoxTrace run_blackbox_loop(const TargetOracle& oracle, const Predictor& target_eval,
                                const BinaryView& held_out, const BinaryView& test,
                                const BlackBoxConfig& cfg, TrainEpochFn train_epoch,
                                SubstitutePredictor substitute, AttackFn attack_builder) {
    cfg.check();
    if (oracle.dim != held_out.dim() || oracle.dim != test.dim())
        throw DataError("oracle/data dimension mismatch");
    Pool pool = seed_pool(oracle, held_out, cfg.seed_set, cfg.seed);

    BlackBoxTrace trace;
    BlackBoxRecord r0;
    r0.epoch = 0;
    r0.target_adv_accuracy = accuracy(target_eval, test);
    r0.clean_match = label_match_rate(substitute(), target_eval, test);
    r0.adv_match = r0.clean_match;  // no adversaries yet
    r0.queries = oracle.queries;
    trace.records.push_back(r0);

    for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
        train_epoch(pool, epoch);
        const Adversary attack = attack_builder(cfg.epsilon);
        BlackBoxRecord r;
        r.epoch = epoch;
        r.clean_match = label_match_rate(substitute(), target_eval, test);
        r.target_adv_accuracy = adversarial_accuracy(attack, target_eval, substitute(),
                                                     test, r.adv_match);
        const Adversary grow = attack_builder(cfg.step());
        augment_pool(pool, oracle, cfg, epoch,
                     [&](const double* x, int y) { return grow(x, y); });
        r.queries = oracle.queries;
        trace.records.push_back(r);
    }
    return trace;
}

}  // namespace detail

// Substitute-model attack with a logistic MLP substitute: fine-tune on the
// oracle-labeled pool each epoch, FGSM the test set against the substitute,
// measure the target on those adversaries, then grow the pool with FGSM
// perturbations of pool points.
inline BlackBoxTrace run_blackbox(const TargetOracle& oracle, const Predictor& target_eval,
                                  const BinaryView& held_out, const BinaryView& test,
                                  const BlackBoxConfig& cfg) {
    cfg.check();
    std::vector<std::size_t> sizes{oracle.dim};
    sizes.insert(sizes.end(), cfg.substitute_hidden.begin(), cfg.substitute_hidden.end());
    sizes.push_back(1);
    LogisticMlp sub = make_mlp(sizes, false, derive_seed(cfg.seed, "substitute", 0));

    auto train_epoch = [&](const detail::Pool& pool, std::size_t epoch) {
        SgdConfig inner = cfg.inner;
        inner.seed = derive_seed(cfg.seed, "inner", epoch);
        sub = detail::train_mlp_impl(
            pool.size(),
            [&](std::uint32_t i) {
                return std::pair<const double*, int>(pool.row(i), pool.y[i]);
            },
            std::move(sub), inner);
    };
    auto substitute = [&]() -> Predictor {
        return [&sub](const double* x) { return mlp_predict(sub, x); };
    };
    auto attack_builder = [&](double eps) -> Adversary {
        AttackConfig acfg;
        acfg.epsilon = eps;
        return [&sub, acfg](const double* x, int y) {
            return attack_fgsm(sub, x, y, acfg);
        };
    };
    return detail::run_blackbox_loop(oracle, target_eval, held_out, test, cfg,
                                     train_epoch, substitute, attack_builder);
}

// Same protocol with a single-run SCD01 substitute. Coordinate search has no
// warm-start semantics, so the substitute is retrained from the same seed on
// the grown pool each epoch; attack and augmentation use the linear sign
// distortion.
inline BlackBoxTrace run_blackbox_scd01_substitute(const TargetOracle& oracle,
                                                   const Predictor& target_eval,
                                                   const BinaryView& held_out,
                                                   const BinaryView& test,
                                                   const BlackBoxConfig& cfg) {
    cfg.check();
    LinearModel sub;
    sub.w.assign(oracle.dim, 0.0);

    auto train_epoch = [&](const detail::Pool& pool, std::size_t) {
        Dataset flat;
        flat.d = pool.d;
        flat.n = pool.size();
        flat.x = pool.x;
        flat.y.reserve(pool.size());
        for (int y : pool.y) flat.y.push_back(y > 0 ? 1 : 0);
        const BinaryView view = binary_view(flat, 1, 0);
        TrainConfig inner = cfg.scd01_inner;  // seed fixed across epochs
        sub = train_scd01(view, inner).first;
    };
    auto substitute = [&]() -> Predictor {
        return [&sub](const double* x) { return predict_sign(sub, x); };
    };
    auto attack_builder = [&](double eps) -> Adversary {
        AttackConfig acfg;
        acfg.epsilon = eps;
        return [&sub, acfg](const double* x, int y) {
            return attack_linear(sub, x, y, acfg);
        };
    };
    return detail::run_blackbox_loop(oracle, target_eval, held_out, test, cfg,
                                     train_epoch, substitute, attack_builder);
}

}  // namespace zeroone
