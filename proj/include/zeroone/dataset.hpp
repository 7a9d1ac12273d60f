#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "zeroone/error.hpp"
#include "zeroone/rng.hpp"

namespace zeroone {

// Row-major feature matrix with integer class ids. `normalized` records
// whether values are in [0,1]; ops that need [0,1] inputs reject raw data
// instead of silently rescaling.
struct Dataset {
    std::size_t n = 0;
    std::size_t d = 0;
    std::vector<double> x;   // n*d
    std::vector<int> y;      // n
    bool normalized = true;
    std::map<int, std::string> class_names;

    const double* row(std::size_t i) const { return x.data() + i * d; }
    double* row(std::size_t i) { return x.data() + i * d; }

    void check() const {
        if (n == 0 || d == 0) throw DataError("empty dataset");
        if (x.size() != n * d) throw DataError("feature size mismatch");
        if (y.size() != n) throw DataError("label size mismatch");
    }
};

inline Dataset normalize(const Dataset& raw) {
    Dataset out = raw;
    for (double& v : out.x) {
        if (v < 0.0 || v > 255.0) throw DataError("value outside [0,255]");
        v /= 255.0;
    }
    out.normalized = true;
    return out;
}

// Saturation transform x' = sign(2x-1)*|2x-1|^(2/p)/2 + 1/2. sign(0)=0 here,
// unlike classification, so x=0.5 stays 0.5 at p=inf.
inline double saturate_value(double x, double p) {
    const double t = 2.0 * x - 1.0;
    const double s = (t > 0.0) ? 1.0 : (t < 0.0 ? -1.0 : 0.0);
    double mag;
    if (std::isinf(p)) {
        mag = (t == 0.0) ? 0.0 : 1.0;
    } else {
        mag = std::pow(std::abs(t), 2.0 / p);
    }
    return s * mag / 2.0 + 0.5;
}

inline Dataset saturate(const Dataset& data, double p) {
    if (!(p > 0.0)) throw DataError("saturation requires p > 0");
    if (!data.normalized) throw DataError("saturate requires normalized data");
    Dataset out = data;
    for (double& v : out.x) v = saturate_value(v, p);
    return out;
}

enum class ViewMode { OneVsOne, OneVsAll };

// Binary relabeling of a dataset: +1 iff base label == positive_class.
// One-vs-one restricts visible rows to the two chosen classes.
struct BinaryView {
    const Dataset* base = nullptr;
    int positive_class = 0;
    ViewMode mode = ViewMode::OneVsAll;
    std::vector<std::uint32_t> rows;
    std::vector<std::int8_t> labels;  // +1 / -1, aligned with rows

    std::size_t size() const { return rows.size(); }
    std::size_t dim() const { return base->d; }
    const double* example(std::size_t i) const { return base->row(rows[i]); }
    int label(std::size_t i) const { return labels[i]; }

    std::size_t count_positive() const {
        return static_cast<std::size_t>(
            std::count(labels.begin(), labels.end(), std::int8_t{1}));
    }
};

inline BinaryView binary_view(const Dataset& data, int positive, int negative) {
    bool seen = false;
    for (int label : data.y) seen = seen || (label == positive);
    if (!seen) throw DataError("positive class absent: " + std::to_string(positive));
    BinaryView v;
    v.base = &data;
    v.positive_class = positive;
    v.mode = ViewMode::OneVsOne;
    for (std::size_t i = 0; i < data.n; ++i) {
        if (data.y[i] == positive || data.y[i] == negative) {
            v.rows.push_back(static_cast<std::uint32_t>(i));
            v.labels.push_back(data.y[i] == positive ? 1 : -1);
        }
    }
    return v;
}

inline BinaryView binary_view(const Dataset& data, int positive) {
    bool seen = false;
    for (int label : data.y) seen = seen || (label == positive);
    if (!seen) throw DataError("positive class absent: " + std::to_string(positive));
    BinaryView v;
    v.base = &data;
    v.positive_class = positive;
    v.mode = ViewMode::OneVsAll;
    v.rows.resize(data.n);
    std::iota(v.rows.begin(), v.rows.end(), 0u);
    v.labels.reserve(data.n);
    for (int label : data.y) v.labels.push_back(label == positive ? 1 : -1);
    return v;
}

// Stratified sample: ceil(fraction * n_c) rows of each class c.
inline Dataset split_and_sample(const Dataset& data, std::uint64_t seed,
                                double fraction) {
    if (!(fraction > 0.0 && fraction <= 1.0)) throw UsageError("fraction in (0,1]");
    std::map<int, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < data.n; ++i) by_class[data.y[i]].push_back(i);
    auto rng = substream(seed, "stratified-sample");
    std::vector<std::size_t> keep;
    for (auto& [cls, idx] : by_class) {
        (void)cls;
        std::shuffle(idx.begin(), idx.end(), rng);
        const auto want = static_cast<std::size_t>(
            std::ceil(fraction * static_cast<double>(idx.size())));
        keep.insert(keep.end(), idx.begin(), idx.begin() + want);
    }
    std::sort(keep.begin(), keep.end());
    Dataset out;
    out.d = data.d;
    out.n = keep.size();
    out.normalized = data.normalized;
    out.class_names = data.class_names;
    out.x.reserve(out.n * out.d);
    out.y.reserve(out.n);
    for (std::size_t i : keep) {
        out.x.insert(out.x.end(), data.row(i), data.row(i) + data.d);
        out.y.push_back(data.y[i]);
    }
    return out;
}

// Per-iteration batch for coordinate descent: fraction of each class,
// without replacement, indices into the view.
inline std::vector<std::uint32_t> stratified_batch(const BinaryView& view,
                                                   double fraction,
                                                   std::mt19937_64& rng) {
    std::vector<std::uint32_t> pos, neg;
    for (std::size_t i = 0; i < view.size(); ++i)
        (view.label(i) > 0 ? pos : neg).push_back(static_cast<std::uint32_t>(i));
    auto take = [&](std::vector<std::uint32_t>& pool) {
        const auto want = static_cast<std::size_t>(
            std::ceil(fraction * static_cast<double>(pool.size())));
        for (std::size_t i = 0; i < want; ++i) {
            std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
            std::swap(pool[i], pool[pick(rng)]);
        }
        pool.resize(want);
    };
    take(pos);
    take(neg);
    pos.insert(pos.end(), neg.begin(), neg.end());
    return pos;
}

}  // namespace zeroone
