#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "zeroone/blackbox.hpp"
#include "zeroone/config.hpp"
#include "zeroone/convex.hpp"
#include "zeroone/csv_io.hpp"
#include "zeroone/dataset.hpp"
#include "zeroone/ensemble.hpp"
#include "zeroone/idx_io.hpp"
#include "zeroone/mlp01.hpp"
#include "zeroone/scd01.hpp"
#include "zeroone/serialize.hpp"
#include "zeroone/synthetic.hpp"
#include "zeroone/version.hpp"
#include "zeroone/zero_one.hpp"

namespace zeroone {

// Default L-inf budgets: 0.3 white-box MNIST, 0.2 black-box MNIST, 0.0625
// synthetic / CIFAR-like data.
inline constexpr double kEpsWhiteboxMnist = 0.3;
inline constexpr double kEpsBlackboxMnist = 0.2;
inline constexpr double kEpsSynthetic = 0.0625;

inline void ensure_dir(const std::string& path) {
    std::error_code ec;
    std::filesystem::create_directories(path, ec);
    if (ec) throw DataError("cannot create directory " + path + ": " + ec.message());
}

inline std::string join_path(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

// ---- task data ------------------------------------------------------------

// Named tasks: the synthetic benchmark pair, its clean control, MNIST 0-vs-1
// (real files when available, generated MNIST-format stand-in otherwise), or
// explicit CSV paths.
struct TaskSpec {
    std::string name = "outlier";  // outlier | clean | mnist01 | csv
    std::string train_csv, test_csv;
    std::size_t label_column = 0;
    std::string mnist_dir;        // searched before the surrogate kicks in
    std::string work_dir = ".";   // surrogate files land here
    std::uint64_t train_seed = 11, test_seed = 12;
    std::size_t mnist_train_count = 2000;
    double saturate_p = 0.0;  // 0: off; use infinity to binarize

    bool saturating() const { return saturate_p != 0.0; }
};

struct TaskData {
    Dataset train;
    Dataset test;
    int positive = 1;
    int negative = 0;

    BinaryView train_view() const { return binary_view(train, positive, negative); }
    BinaryView test_view() const { return binary_view(test, positive, negative); }
};

inline Dataset filter_classes(const Dataset& data, int a, int b) {
    Dataset out;
    out.d = data.d;
    out.normalized = data.normalized;
    out.class_names = data.class_names;
    for (std::size_t i = 0; i < data.n; ++i) {
        if (data.y[i] == a || data.y[i] == b) {
            out.x.insert(out.x.end(), data.row(i), data.row(i) + data.d);
            out.y.push_back(data.y[i]);
        }
    }
    out.n = out.y.size();
    if (out.n == 0) throw DataError("no rows of the requested classes");
    return out;
}

inline std::optional<std::string> find_mnist_dir(const std::string& explicit_dir) {
    std::vector<std::string> candidates;
    if (!explicit_dir.empty()) candidates.push_back(explicit_dir);
    if (const char* env = std::getenv("ZEROONE_MNIST_DIR")) candidates.push_back(env);
    candidates.push_back("data/mnist");
    for (const auto& dir : candidates) {
        if (std::filesystem::exists(
                std::filesystem::path(dir) / "train-images-idx3-ubyte"))
            return dir;
    }
    return std::nullopt;
}

namespace detail {

inline TaskData load_mnist01(const TaskSpec& spec) {
    TaskData task;
    task.positive = 0;  // "classes 0 and 1", class 0 positive
    task.negative = 1;
    if (auto dir = find_mnist_dir(spec.mnist_dir)) {
        const auto p = [&](const char* f) { return join_path(*dir, f); };
        Dataset train_all = load_idx(p("train-images-idx3-ubyte"), p("train-labels-idx1-ubyte"));
        Dataset test_all = load_idx(p("t10k-images-idx3-ubyte"), p("t10k-labels-idx1-ubyte"));
        Dataset train01 = filter_classes(train_all, 0, 1);
        const double fraction =
            std::min(1.0, static_cast<double>(spec.mnist_train_count) /
                              static_cast<double>(train01.n));
        task.train = normalize(split_and_sample(train01, spec.train_seed, fraction));
        task.test = normalize(filter_classes(test_all, 0, 1));
        return task;
    }
    // MNIST-format stand-in, written and read back through the idx pipeline
    const std::string dir = join_path(spec.work_dir, "surrogate-mnist");
    ensure_dir(dir);
    const Dataset train_raw =
        make_digit_pair_surrogate(spec.mnist_train_count / 2, spec.train_seed);
    const Dataset test_raw = make_digit_pair_surrogate(1000, spec.test_seed);
    const auto p = [&](const char* f) { return join_path(dir, f); };
    save_idx(p("train-images-idx3-ubyte"), p("train-labels-idx1-ubyte"), train_raw, 28, 28);
    save_idx(p("t10k-images-idx3-ubyte"), p("t10k-labels-idx1-ubyte"), test_raw, 28, 28);
    task.train = normalize(load_idx(p("train-images-idx3-ubyte"), p("train-labels-idx1-ubyte")));
    task.test = normalize(load_idx(p("t10k-images-idx3-ubyte"), p("t10k-labels-idx1-ubyte")));
    return task;
}

}  // namespace detail

inline TaskData load_task(const TaskSpec& spec) {
    TaskData task;
    if (spec.name == "outlier") {
        task.train = make_outlier_dataset(benchmark_outlier_spec(spec.train_seed));
        task.test = make_outlier_dataset(benchmark_outlier_spec(spec.test_seed));
    } else if (spec.name == "clean") {
        task.train = make_outlier_dataset(benchmark_clean_spec(spec.train_seed));
        task.test = make_outlier_dataset(benchmark_clean_spec(spec.test_seed));
    } else if (spec.name == "mnist01") {
        task = detail::load_mnist01(spec);
    } else if (spec.name == "csv") {
        if (spec.train_csv.empty() || spec.test_csv.empty())
            throw UsageError("csv task needs train and test paths");
        task.train = load_csv(spec.train_csv, spec.label_column);
        task.test = load_csv(spec.test_csv, spec.label_column);
        if (!task.train.normalized || !task.test.normalized)
            throw DataError("csv task data must lie in [0,1]");
    } else {
        throw UsageError("unknown task: " + spec.name);
    }
    if (spec.saturating()) {
        task.train = saturate(task.train, spec.saturate_p);
        task.test = saturate(task.test, spec.saturate_p);
    }
    return task;
}

// ---- model zoo ------------------------------------------------------------

// Benchmark-calibrated defaults. 01-loss singles equal member 0 of the
// same-seed ensemble, mirroring the single-run white-box / ensemble
// black-box split.
struct ZooSpec {
    std::size_t votes = 8;
    TrainConfig scd01;  // iterations 1000, batch 0.75, eta 0.17, k 64
    std::size_t mlp01_hidden = 20;
    double hinge_l2 = 1e-5;
    SgdConfig hinge_sgd;
    std::vector<std::size_t> lmlp_hidden = {20};
    SgdConfig lmlp_sgd;

    ZooSpec() {
        hinge_sgd.rate = 0.02;
        hinge_sgd.epochs = 200;
        lmlp_sgd.rate = 0.01;
        lmlp_sgd.epochs = 200;
    }
};

inline const std::vector<std::string>& zoo_kind_names() {
    static const std::vector<std::string> names{"scd01", "mlp01", "hinge", "lmlp"};
    return names;
}

struct Zoo {
    VoteEnsemble<LinearModel> scd01;
    VoteEnsemble<Mlp01Model> mlp01;
    VoteEnsemble<HingeLinear> hinge;
    VoteEnsemble<LogisticMlp> lmlp;
    std::vector<TrainTrace> scd01_traces;
    std::vector<TrainTrace> mlp01_traces;

    const LinearModel& scd01_single() const { return scd01.members.front(); }
    const Mlp01Model& mlp01_single() const { return mlp01.members.front(); }
    const HingeLinear& hinge_single() const { return hinge.members.front(); }
    const LogisticMlp& lmlp_single() const { return lmlp.members.front(); }
};

inline Zoo train_zoo(const BinaryView& view, const ZooSpec& spec, std::uint64_t seed) {
    Zoo zoo;
    TrainConfig c01 = spec.scd01;
    c01.seed = derive_seed(seed, "zoo-scd01", 0);
    zoo.scd01 = train_scd01_ensemble(view, c01, spec.votes, &zoo.scd01_traces);
    TrainConfig cm = spec.scd01;
    cm.seed = derive_seed(seed, "zoo-mlp01", 0);
    zoo.mlp01 =
        train_mlp01_ensemble(view, spec.mlp01_hidden, cm, spec.votes, &zoo.mlp01_traces);
    SgdConfig ch = spec.hinge_sgd;
    ch.seed = derive_seed(seed, "zoo-hinge", 0);
    zoo.hinge = train_hinge_ensemble(view, spec.hinge_l2, ch, spec.votes);
    SgdConfig cl = spec.lmlp_sgd;
    cl.seed = derive_seed(seed, "zoo-lmlp", 0);
    zoo.lmlp = train_mlp_ensemble(view, spec.lmlp_hidden, cl, spec.votes);
    return zoo;
}

// Cross-validated hinge regularization over the standard grid: stratified
// 80/20 split of the train view, lowest validation error wins, ties to the
// smaller value, final model retrained on everything.
inline std::pair<HingeLinear, double> train_hinge_cv(const BinaryView& view,
                                                     const SgdConfig& cfg) {
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < view.size(); ++i)
        (view.label(i) > 0 ? pos : neg).push_back(i);
    auto rng = substream(cfg.seed, "hinge-cv");
    std::shuffle(pos.begin(), pos.end(), rng);
    std::shuffle(neg.begin(), neg.end(), rng);
    BinaryView fit = view, val = view;
    fit.rows.clear();
    fit.labels.clear();
    val.rows.clear();
    val.labels.clear();
    auto deal = [&](const std::vector<std::size_t>& idx) {
        const std::size_t cut = (idx.size() * 4) / 5;
        for (std::size_t i = 0; i < idx.size(); ++i) {
            BinaryView& dst = i < cut ? fit : val;
            dst.rows.push_back(view.rows[idx[i]]);
            dst.labels.push_back(view.labels[idx[i]]);
        }
    };
    deal(pos);
    deal(neg);
    if (fit.size() == 0 || val.size() == 0) throw DataError("view too small for cv");

    const double grid[] = {1e-5, 1e-4, 1e-3, 1e-2, 1e-1};
    double best_l2 = grid[0], best_err = std::numeric_limits<double>::infinity();
    for (double l2 : grid) {
        const HingeLinear m = train_hinge(fit, l2, cfg);
        std::size_t wrong = 0;
        for (std::size_t i = 0; i < val.size(); ++i)
            wrong += m.predict(val.example(i)) != val.label(i);
        const double err = static_cast<double>(wrong) / static_cast<double>(val.size());
        if (err < best_err) {
            best_err = err;
            best_l2 = l2;
        }
    }
    return {train_hinge(view, best_l2, cfg), best_l2};
}

// ---- reporting helpers ----------------------------------------------------

inline double accuracy_on(const Predictor& model, const AdversarialBatch& batch) {
    if (batch.n == 0) throw DataError("empty batch");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < batch.n; ++i)
        hits += model(batch.perturbed.data() + i * batch.d) == batch.labels[i];
    return static_cast<double>(hits) / static_cast<double>(batch.n);
}

inline void write_train_trace_csv(const std::string& path, const TrainTrace& trace) {
    std::vector<std::vector<std::string>> rows;
    rows.reserve(trace.records.size());
    for (std::size_t i = 0; i < trace.records.size(); ++i) {
        const auto& r = trace.records[i];
        rows.push_back({std::to_string(i + 1), fmt_real(r.batch_objective),
                        fmt_real(r.best_full_objective)});
    }
    write_table_csv(path, {"iteration", "batch_objective", "best_full_objective"}, rows);
}

inline void write_blackbox_trace_csv(const std::string& path, const BlackBoxTrace& trace) {
    std::vector<std::vector<std::string>> rows;
    rows.reserve(trace.records.size());
    for (const auto& r : trace.records)
        rows.push_back({std::to_string(r.epoch), fmt_real(r.target_adv_accuracy),
                        fmt_real(r.clean_match), fmt_real(r.adv_match),
                        std::to_string(r.queries)});
    write_table_csv(path, {"epoch", "target_adv_accuracy", "clean_match", "adv_match",
                           "queries"},
                    rows);
}

// Manifest = resolved config + versions; no clocks, so reruns are identical.
inline void write_manifest(const std::string& out_dir, const std::string& command,
                           const Config& resolved) {
    Config manifest = resolved;
    manifest.values["run.command"] = command;
    manifest.values["run.library_version"] = kLibraryVersion;
    manifest.values["run.model_format_version"] = std::to_string(kModelFormatVersion);
    std::ofstream out(join_path(out_dir, "manifest.cfg"));
    if (!out) throw DataError("cannot write manifest in " + out_dir);
    out << manifest.to_text();
}

}  // namespace zeroone
