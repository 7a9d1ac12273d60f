#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "zeroone/dataset.hpp"
#include "zeroone/error.hpp"

namespace zeroone {

struct LinearModel {
    std::vector<double> w;
    double w0 = 0.0;

    std::size_t dim() const { return w.size(); }
};

// Classification convention: sign(0) = +1.
inline int sign_pred(double v) { return v >= 0.0 ? 1 : -1; }

inline double raw_score(const LinearModel& m, const double* x) {
    double s = m.w0;
    for (std::size_t j = 0; j < m.w.size(); ++j) s += m.w[j] * x[j];
    return s;
}

inline int predict_sign(const LinearModel& m, const double* x) {
    return sign_pred(raw_score(m, x));
}

struct ObjectiveValue {
    double loss = 0.0;  // plain: fraction misclassified; balanced: mean class rate
    bool balanced = false;
    double rate_pos = 0.0;
    double rate_neg = 0.0;
};

// Flat sample access used by the trainers: rows may point into a Dataset or
// into a scratch activation matrix (MLP01 output node sees hidden outputs).
struct SampleSet {
    std::vector<const double*> xs;
    std::vector<std::int8_t> ys;
    std::size_t d = 0;

    std::size_t size() const { return xs.size(); }

    static SampleSet from_view(const BinaryView& view) {
        SampleSet s;
        s.d = view.dim();
        s.xs.reserve(view.size());
        s.ys.assign(view.labels.begin(), view.labels.end());
        for (std::size_t i = 0; i < view.size(); ++i) s.xs.push_back(view.example(i));
        return s;
    }

    static SampleSet from_view(const BinaryView& view,
                               const std::vector<std::uint32_t>& idx) {
        SampleSet s;
        s.d = view.dim();
        s.xs.reserve(idx.size());
        s.ys.reserve(idx.size());
        for (auto i : idx) {
            s.xs.push_back(view.example(i));
            s.ys.push_back(view.labels[i]);
        }
        return s;
    }
};

// Integer cost units keep threshold-search comparisons exact; the balanced
// objective uses per-error weights n_neg (positive class) and n_pos so that
// cost/(2*n_pos*n_neg) equals the mean of the per-class error rates.
struct CostVector {
    std::vector<std::int64_t> as_pos;  // cost of predicting +1 for example i
    std::vector<std::int64_t> as_neg;  // cost of predicting -1
    double denom = 1.0;                // cost -> loss divisor

    static CostVector plain(const std::vector<std::int8_t>& ys) {
        CostVector c;
        c.as_pos.resize(ys.size());
        c.as_neg.resize(ys.size());
        for (std::size_t i = 0; i < ys.size(); ++i) {
            c.as_pos[i] = ys[i] < 0;
            c.as_neg[i] = ys[i] > 0;
        }
        c.denom = static_cast<double>(ys.size());
        return c;
    }

    static CostVector balanced(const std::vector<std::int8_t>& ys) {
        std::int64_t npos = 0;
        for (auto y : ys) npos += (y > 0);
        const std::int64_t nneg = static_cast<std::int64_t>(ys.size()) - npos;
        if (npos == 0 || nneg == 0) throw DataError("balanced objective needs both classes");
        CostVector c;
        c.as_pos.resize(ys.size());
        c.as_neg.resize(ys.size());
        for (std::size_t i = 0; i < ys.size(); ++i) {
            c.as_pos[i] = (ys[i] < 0) ? npos : 0;
            c.as_neg[i] = (ys[i] > 0) ? nneg : 0;
        }
        c.denom = 2.0 * static_cast<double>(npos) * static_cast<double>(nneg);
        return c;
    }

    static CostVector make(const std::vector<std::int8_t>& ys, bool use_balanced) {
        return use_balanced ? balanced(ys) : plain(ys);
    }
};

inline std::int64_t cost_at(const CostVector& c, const std::vector<double>& proj,
                            double w0) {
    std::int64_t total = 0;
    for (std::size_t i = 0; i < proj.size(); ++i)
        total += (proj[i] + w0 >= 0.0) ? c.as_pos[i] : c.as_neg[i];
    return total;
}

struct ThresholdResult {
    double w0 = 0.0;
    std::int64_t cost = 0;
};

// Line search over thresholds on fixed projections. Candidates: midpoints of
// consecutive distinct sorted projections plus (min-1) and (max+1); above the
// cap, evenly subsampled across the sorted order keeping both extremes.
// Ties: lowest cost, then closest to the median projection, then smaller
// threshold. Returned w0 = -threshold.
inline ThresholdResult optimal_threshold_core(const std::vector<double>& proj,
                                              const CostVector& cost,
                                              std::size_t cap = 100) {
    const std::size_t n = proj.size();
    if (n == 0) throw DataError("optimal_threshold on empty projection set");

    std::vector<std::uint32_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<std::uint32_t>(i);
    std::sort(order.begin(), order.end(),
              [&](std::uint32_t a, std::uint32_t b) { return proj[a] < proj[b]; });

    // suffix[k] = cost of predicting +1 for sorted positions k..n-1;
    // prefix[k] = cost of predicting -1 for sorted positions 0..k-1.
    std::vector<std::int64_t> prefix(n + 1, 0), suffix(n + 1, 0);
    for (std::size_t k = 0; k < n; ++k)
        prefix[k + 1] = prefix[k] + cost.as_neg[order[k]];
    for (std::size_t k = n; k > 0; --k)
        suffix[k - 1] = suffix[k] + cost.as_pos[order[k - 1]];

    // Candidate thresholds, ascending: cut position k means sorted positions
    // < k predict -1. k=0 -> everything +1, k=n -> everything -1.
    std::vector<std::pair<double, std::size_t>> cands;
    cands.emplace_back(proj[order[0]] - 1.0, 0);
    for (std::size_t k = 1; k < n; ++k) {
        const double lo = proj[order[k - 1]], hi = proj[order[k]];
        if (lo < hi) cands.emplace_back(lo + (hi - lo) / 2.0, k);
    }
    cands.emplace_back(proj[order[n - 1]] + 1.0, n);

    if (cap >= 2 && cands.size() > cap) {
        std::vector<std::pair<double, std::size_t>> kept;
        kept.reserve(cap);
        const std::size_t m = cands.size();
        for (std::size_t i = 0; i < cap; ++i)
            kept.push_back(cands[(i * (m - 1)) / (cap - 1)]);
        kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
        cands.swap(kept);
    }

    const double median = (n % 2 == 1)
        ? proj[order[n / 2]]
        : proj[order[n / 2 - 1]] + (proj[order[n / 2]] - proj[order[n / 2 - 1]]) / 2.0;

    double best_t = cands.front().first;
    std::int64_t best_cost = std::numeric_limits<std::int64_t>::max();
    double best_dist = 0.0;
    for (const auto& [t, k] : cands) {
        const std::int64_t c = prefix[k] + suffix[k];
        const double dist = std::abs(t - median);
        if (c < best_cost ||
            (c == best_cost && (dist < best_dist ||
                                (dist == best_dist && t < best_t)))) {
            best_cost = c;
            best_dist = dist;
            best_t = t;
        }
    }
    return {-best_t, best_cost};
}

inline void project(const SampleSet& s, const std::vector<double>& w,
                    std::vector<double>& out) {
    out.resize(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        double p = 0.0;
        const double* x = s.xs[i];
        for (std::size_t j = 0; j < s.d; ++j) p += w[j] * x[j];
        out[i] = p;
    }
}

inline ObjectiveValue objective_from_counts(std::size_t err_pos, std::size_t npos,
                                            std::size_t err_neg, std::size_t nneg,
                                            bool balanced) {
    ObjectiveValue o;
    o.balanced = balanced;
    o.rate_pos = npos ? static_cast<double>(err_pos) / static_cast<double>(npos) : 0.0;
    o.rate_neg = nneg ? static_cast<double>(err_neg) / static_cast<double>(nneg) : 0.0;
    if (balanced) {
        o.loss = (o.rate_pos + o.rate_neg) / 2.0;
    } else {
        o.loss = static_cast<double>(err_pos + err_neg) /
                 static_cast<double>(npos + nneg);
    }
    return o;
}

inline ObjectiveValue zero_one_objective(const LinearModel& m, const BinaryView& view,
                                         bool balanced = false) {
    if (view.size() == 0) throw DataError("objective on empty view");
    std::size_t err_pos = 0, err_neg = 0, npos = 0;
    for (std::size_t i = 0; i < view.size(); ++i) {
        const int y = view.label(i);
        npos += (y > 0);
        if (predict_sign(m, view.example(i)) != y) (y > 0 ? err_pos : err_neg)++;
    }
    return objective_from_counts(err_pos, npos, err_neg, view.size() - npos, balanced);
}

// Public threshold re-fit on a whole view: returns best w0 for fixed w.
inline std::pair<double, ObjectiveValue> optimal_threshold(
    const std::vector<double>& w, const BinaryView& view, bool balanced = false) {
    if (view.size() == 0) throw DataError("optimal_threshold on empty view");
    SampleSet s = SampleSet::from_view(view);
    std::vector<double> proj;
    project(s, w, proj);
    const CostVector cost = CostVector::make(s.ys, balanced);
    const ThresholdResult r = optimal_threshold_core(proj, cost);
    LinearModel m{w, r.w0};
    return {r.w0, zero_one_objective(m, view, balanced)};
}

// One stochastic coordinate-descent step: among k random coordinates x
// {+eta,-eta}, each with its threshold re-fit, adopt the strictly best
// candidate. Ties: lowest coordinate index, then + before -. `proj` holds
// w^T x per sample and is updated in place on acceptance.
inline bool coordinate_step(LinearModel& m, const SampleSet& s,
                            std::vector<double>& proj, std::size_t k_features,
                            double eta, std::mt19937_64& rng,
                            bool balanced = false) {
    if (k_features > m.dim()) throw UsageError("k_features exceeds dimensionality");
    const CostVector cost = CostVector::make(s.ys, balanced);
    const std::int64_t current = cost_at(cost, proj, m.w0);

    // Partial Fisher-Yates over coordinate ids, then ascending for the
    // documented tie order.
    std::vector<std::uint32_t> coords(m.dim());
    for (std::size_t j = 0; j < coords.size(); ++j)
        coords[j] = static_cast<std::uint32_t>(j);
    for (std::size_t j = 0; j < k_features; ++j) {
        std::uniform_int_distribution<std::size_t> pick(j, coords.size() - 1);
        std::swap(coords[j], coords[pick(rng)]);
    }
    coords.resize(k_features);
    std::sort(coords.begin(), coords.end());

    std::int64_t best_cost = current;
    std::uint32_t best_j = 0;
    double best_delta = 0.0, best_w0 = m.w0;
    bool improved = false;
    std::vector<double> cand(proj.size());
    for (std::uint32_t j : coords) {
        for (const double delta : {+eta, -eta}) {
            for (std::size_t i = 0; i < s.size(); ++i)
                cand[i] = proj[i] + delta * s.xs[i][j];
            const ThresholdResult r = optimal_threshold_core(cand, cost);
            if (r.cost < best_cost) {
                best_cost = r.cost;
                best_j = j;
                best_delta = delta;
                best_w0 = r.w0;
                improved = true;
            }
        }
    }
    if (improved) {
        m.w[best_j] += best_delta;
        m.w0 = best_w0;
        for (std::size_t i = 0; i < s.size(); ++i)
            proj[i] += best_delta * s.xs[i][best_j];
    }
    return improved;
}

}  // namespace zeroone
