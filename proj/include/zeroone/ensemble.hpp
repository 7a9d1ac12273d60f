#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <vector>

#include "zeroone/attacks.hpp"
#include "zeroone/convex.hpp"
#include "zeroone/mlp01.hpp"
#include "zeroone/scd01.hpp"
#include "zeroone/zero_one.hpp"

namespace zeroone {

inline int predict_one(const LinearModel& m, const double* x) {
    return predict_sign(m, x);
}
inline int predict_one(const Mlp01Model& m, const double* x) { return m.predict(x); }
inline int predict_one(const HingeLinear& m, const double* x) { return m.predict(x); }
inline int predict_one(const LogisticMlp& m, const double* x) {
    return mlp_predict(m, x);
}

template <typename Model>
struct VoteEnsemble {
    std::vector<Model> members;

    std::size_t vote_count() const { return members.size(); }
};

struct VotePrediction {
    int label = 1;
    double confidence = 0.0;  // fraction of members voting +1
};

template <typename Model>
VotePrediction vote_predict(const VoteEnsemble<Model>& e, const double* x) {
    if (e.members.empty()) throw UsageError("empty ensemble");
    std::size_t pos = 0;
    for (const Model& m : e.members) pos += predict_one(m, x) > 0;
    VotePrediction p;
    p.confidence = static_cast<double>(pos) / static_cast<double>(e.members.size());
    p.label = (2 * pos >= e.members.size()) ? 1 : -1;  // tie -> +1
    return p;
}

template <typename Model>
Predictor predictor(const Model& m) {
    return [&m](const double* x) { return predict_one(m, x); };
}

template <typename Model>
Predictor predictor(const VoteEnsemble<Model>& e) {
    return [&e](const double* x) { return vote_predict(e, x).label; };
}

template <typename Model>
struct OneVsAllModel {
    std::vector<VoteEnsemble<Model>> per_class;
};

struct OvaPrediction {
    int class_id = 0;
    std::vector<double> confidences;
};

template <typename Model>
OvaPrediction ova_predict(const OneVsAllModel<Model>& m, const double* x) {
    if (m.per_class.empty()) throw UsageError("empty one-vs-all model");
    OvaPrediction p;
    p.confidences.reserve(m.per_class.size());
    for (const auto& e : m.per_class)
        p.confidences.push_back(vote_predict(e, x).confidence);
    for (std::size_t c = 1; c < p.confidences.size(); ++c)
        if (p.confidences[c] > p.confidences[static_cast<std::size_t>(p.class_id)])
            p.class_id = static_cast<int>(c);
    return p;
}

// 01-loss members differ only by master seed (same data); convex members are
// trained on full-size bootstrap resamples.
inline VoteEnsemble<LinearModel> train_scd01_ensemble(
    const BinaryView& view, TrainConfig cfg, std::size_t vote_count,
    std::vector<TrainTrace>* traces = nullptr) {
    if (vote_count < 1) throw UsageError("vote_count >= 1");
    VoteEnsemble<LinearModel> e;
    const std::uint64_t base = cfg.seed;
    for (std::size_t i = 0; i < vote_count; ++i) {
        cfg.seed = base + i;
        auto [model, trace] = train_scd01(view, cfg);
        e.members.push_back(std::move(model));
        if (traces) traces->push_back(std::move(trace));
    }
    return e;
}

inline VoteEnsemble<Mlp01Model> train_mlp01_ensemble(
    const BinaryView& view, std::size_t hidden, TrainConfig cfg,
    std::size_t vote_count, std::vector<TrainTrace>* traces = nullptr) {
    if (vote_count < 1) throw UsageError("vote_count >= 1");
    VoteEnsemble<Mlp01Model> e;
    const std::uint64_t base = cfg.seed;
    for (std::size_t i = 0; i < vote_count; ++i) {
        cfg.seed = base + i;
        auto [model, trace] = train_mlp01(view, hidden, cfg);
        e.members.push_back(std::move(model));
        if (traces) traces->push_back(std::move(trace));
    }
    return e;
}

inline BinaryView bootstrap_view(const BinaryView& view, std::uint64_t master_seed,
                                 std::size_t member) {
    auto rng = substream(master_seed, "bootstrap", member);
    std::uniform_int_distribution<std::size_t> pick(0, view.size() - 1);
    BinaryView out = view;
    out.rows.clear();
    out.labels.clear();
    for (std::size_t i = 0; i < view.size(); ++i) {
        const std::size_t j = pick(rng);
        out.rows.push_back(view.rows[j]);
        out.labels.push_back(view.labels[j]);
    }
    return out;
}

inline VoteEnsemble<HingeLinear> train_hinge_ensemble(const BinaryView& view, double l2,
                                                      SgdConfig cfg,
                                                      std::size_t vote_count) {
    if (vote_count < 1) throw UsageError("vote_count >= 1");
    VoteEnsemble<HingeLinear> e;
    const std::uint64_t base = cfg.seed;
    for (std::size_t i = 0; i < vote_count; ++i) {
        cfg.seed = base + i;
        e.members.push_back(train_hinge(bootstrap_view(view, base, i), l2, cfg));
    }
    return e;
}

inline VoteEnsemble<LogisticMlp> train_mlp_ensemble(const BinaryView& view,
                                                    const std::vector<std::size_t>& hidden,
                                                    SgdConfig cfg,
                                                    std::size_t vote_count) {
    if (vote_count < 1) throw UsageError("vote_count >= 1");
    VoteEnsemble<LogisticMlp> e;
    const std::uint64_t base = cfg.seed;
    for (std::size_t i = 0; i < vote_count; ++i) {
        cfg.seed = base + i;
        e.members.push_back(train_mlp(bootstrap_view(view, base, i), hidden, cfg));
    }
    return e;
}

// White-box adversary factories. The vote is non-differentiable, so ensemble
// sources are attacked through member 0; black-box code treats ensembles as
// label oracles instead.
inline Adversary adversary(const LinearModel& m, const AttackConfig& cfg) {
    return [&m, cfg](const double* x, int y) { return attack_linear(m, x, y, cfg); };
}
inline Adversary adversary(const HingeLinear& m, const AttackConfig& cfg) {
    return [&m, cfg](const double* x, int y) { return attack_linear(m, x, y, cfg); };
}
inline Adversary adversary(const LogisticMlp& m, const AttackConfig& cfg) {
    return [&m, cfg](const double* x, int y) { return attack_fgsm(m, x, y, cfg); };
}
inline Adversary adversary(const Mlp01Model& m, const AttackConfig& cfg,
                           std::uint64_t seed) {
    auto rng = std::make_shared<std::mt19937_64>(substream(seed, "mlp01-attack"));
    return [&m, cfg, rng](const double* x, int y) {
        return attack_mlp01(m, x, y, cfg, *rng);
    };
}

template <typename Model>
Adversary adversary(const VoteEnsemble<Model>& e, const AttackConfig& cfg) {
    if (e.members.empty()) throw UsageError("empty ensemble");
    return adversary(e.members.front(), cfg);
}
inline Adversary adversary(const VoteEnsemble<Mlp01Model>& e, const AttackConfig& cfg,
                           std::uint64_t seed) {
    if (e.members.empty()) throw UsageError("empty ensemble");
    return adversary(e.members.front(), cfg, seed);
}

}  // namespace zeroone
