#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "zeroone/dataset.hpp"
#include "zeroone/rng.hpp"

namespace zeroone {

// Two gaussian-free clusters in [0,1]^dim built from a +-1 sign pattern u:
// class 1 centers at 0.5 + separation*u, class 0 at 0.5 - separation*u, with
// uniform coordinate noise and clipping. Only the first signal_dims
// coordinates carry the pattern (0 means all of them); the rest stay at 0.5
// and carry noise alone. Outliers sit far on class 1's side of the pattern
// but are labeled 0, the shape that drags large-margin boundaries while
// leaving the 01-loss optimum at the cluster gap.
struct SyntheticOutlierSpec {
    std::size_t dim = 2;
    std::size_t signal_dims = 0;  // 0 -> dim
    double separation = 0.10;
    double noise = 0.12;
    std::size_t count_per_class = 300;
    std::size_t outliers = 0;
    double outlier_displacement = 0.4;
    double label_flip_fraction = 0.0;
    std::uint64_t pattern_seed = 40;
    std::uint64_t seed = 0;

    void check() const {
        if (dim < 1) throw UsageError("dim >= 1");
        if (signal_dims > dim) throw UsageError("signal_dims <= dim");
        if (count_per_class < 1) throw UsageError("count_per_class >= 1");
        if (!(separation >= 0.0) || !(noise >= 0.0) || !(outlier_displacement >= 0.0))
            throw UsageError("separation, noise, displacement >= 0");
        if (!(label_flip_fraction >= 0.0 && label_flip_fraction <= 1.0))
            throw UsageError("label_flip_fraction in [0,1]");
    }
};

// Balanced +-1 pattern: half the signal coordinates get +1, half -1 (the odd
// one out, if any, gets +1), order shuffled by the pattern seed. Keeping the
// pattern seed separate from the sample seed lets train and test sets share
// geometry while drawing disjoint noise.
inline std::vector<int> sign_pattern(std::size_t signal_dims, std::uint64_t pattern_seed) {
    std::vector<int> u(signal_dims, -1);
    for (std::size_t j = 0; j < (signal_dims + 1) / 2; ++j) u[j] = 1;
    auto rng = substream(pattern_seed, "sign-pattern");
    std::shuffle(u.begin(), u.end(), rng);
    return u;
}

inline Dataset make_outlier_dataset(const SyntheticOutlierSpec& spec) {
    spec.check();
    const std::size_t dsig = spec.signal_dims == 0 ? spec.dim : spec.signal_dims;
    const std::vector<int> u = sign_pattern(dsig, spec.pattern_seed);
    auto rng = substream(spec.seed, "outlier-samples");
    std::uniform_real_distribution<double> jitter(-spec.noise, spec.noise);

    Dataset data;
    data.d = spec.dim;
    data.n = 2 * spec.count_per_class + spec.outliers;
    data.x.reserve(data.n * data.d);
    data.y.reserve(data.n);
    auto emit = [&](int cls, double shift) {
        for (std::size_t j = 0; j < spec.dim; ++j) {
            double v = 0.5;
            if (j < dsig) v += shift * u[j];
            v += jitter(rng);
            data.x.push_back(std::min(1.0, std::max(0.0, v)));
        }
        data.y.push_back(cls);
    };
    for (std::size_t i = 0; i < spec.count_per_class; ++i) emit(0, -spec.separation);
    for (std::size_t i = 0; i < spec.count_per_class; ++i) emit(1, spec.separation);
    for (std::size_t i = 0; i < spec.outliers; ++i) emit(0, spec.outlier_displacement);

    const auto flips =
        static_cast<std::size_t>(std::llround(spec.label_flip_fraction *
                                              static_cast<double>(data.n)));
    if (flips > 0) {
        auto flip_rng = substream(spec.seed, "label-flips");
        std::vector<std::uint32_t> idx(data.n);
        std::iota(idx.begin(), idx.end(), 0u);
        for (std::size_t i = 0; i < flips; ++i) {
            std::uniform_int_distribution<std::size_t> pick(i, data.n - 1);
            std::swap(idx[i], idx[pick(flip_rng)]);
            data.y[idx[i]] = 1 - data.y[idx[i]];
        }
    }
    data.normalized = true;
    data.check();
    return data;
}

// The benchmark pair used across the transfer and black-box experiments:
// 48 dims with a 16-dim signal subspace, wide uniform noise, and a heavy
// mislabeled outlier block near the positive cluster. Train and test differ
// only in the sample seed.
inline SyntheticOutlierSpec benchmark_outlier_spec(std::uint64_t sample_seed) {
    SyntheticOutlierSpec spec;
    spec.dim = 48;
    spec.signal_dims = 16;
    spec.separation = 0.10;
    spec.noise = 0.12;
    spec.count_per_class = 300;
    spec.outliers = 64;
    spec.outlier_displacement = 0.4;
    spec.pattern_seed = 40;
    spec.seed = sample_seed;
    return spec;
}

// Control benchmark: same shape, wider class gap, no outliers.
inline SyntheticOutlierSpec benchmark_clean_spec(std::uint64_t sample_seed) {
    SyntheticOutlierSpec spec = benchmark_outlier_spec(sample_seed);
    spec.separation = 0.15;
    spec.outliers = 0;
    return spec;
}

// Tiny 2-d scene where the 01-loss optimum and the hinge optimum disagree:
// a wide negative cluster, a nearby positive cluster, and one far negative
// outlier on the positive side. The best separator by error count slices the
// cluster gap and eats exactly the outlier; a margin-driven line tilts toward
// the outlier and gives up cluster points instead.
inline Dataset make_skew_scene(std::uint64_t seed) {
    auto rng = substream(seed, "skew-scene");
    Dataset data;
    data.d = 2;
    auto emit = [&](int cls, double cx, double cy, double halfwidth) {
        std::uniform_real_distribution<double> dx(-halfwidth, halfwidth);
        data.x.push_back(std::min(1.0, std::max(0.0, cx + dx(rng))));
        data.x.push_back(std::min(1.0, std::max(0.0, cy + dx(rng))));
        data.y.push_back(cls);
    };
    for (int i = 0; i < 24; ++i) emit(0, 0.24, 0.50, 0.08);
    for (int i = 0; i < 12; ++i) emit(1, 0.41, 0.50, 0.08);
    data.x.push_back(1.00);
    data.x.push_back(0.80);
    data.y.push_back(0);
    data.n = data.y.size();
    data.normalized = true;
    data.check();
    return data;
}

// MNIST-shaped stand-in for the 0-vs-1 task when the real files are absent:
// class 0 draws a jittered ring, class 1 a jittered near-vertical stroke, on
// 28x28 rasters with pixel values in 0..255. Interleaved emission keeps both
// classes present in any prefix.
inline Dataset make_digit_pair_surrogate(std::size_t per_class, std::uint64_t seed) {
    if (per_class < 1) throw UsageError("per_class >= 1");
    auto rng = substream(seed, "digit-surrogate");
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::size_t side = 28;
    Dataset data;
    data.d = side * side;
    data.n = 2 * per_class;
    data.x.assign(data.n * data.d, 0.0);
    data.y.resize(data.n);

    auto paint = [&](double* img, std::size_t r, std::size_t c, double v) {
        if (r < side && c < side) img[r * side + c] = std::max(img[r * side + c], v);
    };
    for (std::size_t i = 0; i < data.n; ++i) {
        double* img = data.x.data() + i * data.d;
        const int cls = static_cast<int>(i % 2);
        data.y[i] = cls;
        const double bright = 180.0 + 75.0 * unit(rng);
        if (cls == 0) {
            const double cx = 13.5 + 4.0 * (unit(rng) - 0.5);
            const double cy = 13.5 + 4.0 * (unit(rng) - 0.5);
            const double rx = 5.5 + 3.0 * unit(rng);
            const double ry = 6.5 + 3.0 * unit(rng);
            for (int t = 0; t < 256; ++t) {
                const double a = 2.0 * 3.14159265358979323846 * t / 256.0;
                const double x = cx + rx * std::cos(a);
                const double y = cy + ry * std::sin(a);
                const auto r = static_cast<std::size_t>(std::lround(y));
                const auto c = static_cast<std::size_t>(std::lround(x));
                paint(img, r, c, bright);
                paint(img, r, c + 1, bright * 0.7);
                paint(img, r + 1, c, bright * 0.7);
            }
        } else {
            const double col0 = 13.5 + 6.0 * (unit(rng) - 0.5);
            const double slant = 0.30 * (unit(rng) - 0.5);
            const std::size_t top = 3 + static_cast<std::size_t>(2.0 * unit(rng));
            const std::size_t bot = 23 + static_cast<std::size_t>(2.0 * unit(rng));
            for (std::size_t r = top; r <= bot && r < side; ++r) {
                const double c = col0 + slant * (static_cast<double>(r) - 14.0);
                const auto ci = static_cast<std::size_t>(std::lround(c));
                paint(img, r, ci, bright);
                paint(img, r, ci + 1, bright * 0.8);
            }
        }
        // speckle so no pixel is constant across a class
        for (int s = 0; s < 10; ++s) {
            const auto r = static_cast<std::size_t>(27.999 * unit(rng));
            const auto c = static_cast<std::size_t>(27.999 * unit(rng));
            paint(img, r, c, 40.0 + 60.0 * unit(rng));
        }
    }
    data.normalized = false;
    data.check();
    return data;
}

}  // namespace zeroone
