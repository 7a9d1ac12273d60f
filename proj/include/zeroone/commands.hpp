#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "zeroone/experiment.hpp"
#include "zeroone/thread_pool.hpp"

namespace zeroone {

struct CommonOpts {
    std::string out = "run";
    std::uint64_t seed = 1;
    std::size_t workers = 1;
    TaskSpec task;
};

inline void echo_common(Config& echo, const CommonOpts& c, const std::string& command) {
    echo.values["run.seed"] = std::to_string(c.seed);
    echo.values["run.workers"] = std::to_string(c.workers);
    echo.values["run.out"] = c.out;
    echo.values["task.name"] = c.task.name;
    echo.values["task.train_seed"] = std::to_string(c.task.train_seed);
    echo.values["task.test_seed"] = std::to_string(c.task.test_seed);
    if (!c.task.train_csv.empty()) echo.values["task.train_csv"] = c.task.train_csv;
    if (!c.task.test_csv.empty()) echo.values["task.test_csv"] = c.task.test_csv;
    if (!c.task.mnist_dir.empty()) echo.values["task.mnist_dir"] = c.task.mnist_dir;
    if (c.task.saturating())
        echo.values["task.saturate_p"] = fmt_real(c.task.saturate_p);
    (void)command;
}

inline TaskData prepare_task(const CommonOpts& c) {
    TaskSpec spec = c.task;
    spec.work_dir = c.out;
    return load_task(spec);
}

inline std::string model_file_name(const std::string& kind, bool vote) {
    return vote ? kind + "-vote.model" : kind + ".model";
}

// ---- train ----------------------------------------------------------------

struct TrainCmd {
    CommonOpts common;
    std::vector<std::string> kinds{"all"};
    std::size_t votes = 1;
    ZooSpec zoo;
    bool hinge_cv = false;
};

inline void run_train(const TrainCmd& cmd) {
    ensure_dir(cmd.common.out);
    const TaskData task = prepare_task(cmd.common);
    const BinaryView view = task.train_view();
    auto want = [&](const std::string& kind) {
        for (const auto& k : cmd.kinds)
            if (k == "all" || k == kind) return true;
        return false;
    };
    nlohmann::json report;
    auto save_pair = [&](const std::string& kind, const auto& ensemble,
                         std::uint64_t seed) {
        const std::string single_file = model_file_name(kind, false);
        save_model(join_path(cmd.common.out, single_file), ensemble.members.front(),
                   seed);
        report[kind]["file"] = single_file;
        if (cmd.votes > 1) {
            const std::string vote_file = model_file_name(kind, true);
            save_model(join_path(cmd.common.out, vote_file), ensemble, seed);
            report[kind]["vote_file"] = vote_file;
            report[kind]["votes"] = cmd.votes;
        }
        report[kind]["train_accuracy"] =
            accuracy(predictor(ensemble.members.front()), view);
    };

    if (want("scd01")) {
        TrainConfig cfg = cmd.zoo.scd01;
        cfg.seed = derive_seed(cmd.common.seed, "zoo-scd01", 0);
        std::vector<TrainTrace> traces;
        const auto ens = train_scd01_ensemble(view, cfg, cmd.votes, &traces);
        save_pair("scd01", ens, cfg.seed);
        for (std::size_t i = 0; i < traces.size(); ++i)
            write_train_trace_csv(
                join_path(cmd.common.out, "trace-scd01-" + std::to_string(i) + ".csv"),
                traces[i]);
    }
    if (want("mlp01")) {
        TrainConfig cfg = cmd.zoo.scd01;
        cfg.seed = derive_seed(cmd.common.seed, "zoo-mlp01", 0);
        std::vector<TrainTrace> traces;
        const auto ens =
            train_mlp01_ensemble(view, cmd.zoo.mlp01_hidden, cfg, cmd.votes, &traces);
        save_pair("mlp01", ens, cfg.seed);
        for (std::size_t i = 0; i < traces.size(); ++i)
            write_train_trace_csv(
                join_path(cmd.common.out, "trace-mlp01-" + std::to_string(i) + ".csv"),
                traces[i]);
    }
    if (want("hinge")) {
        SgdConfig cfg = cmd.zoo.hinge_sgd;
        cfg.seed = derive_seed(cmd.common.seed, "zoo-hinge", 0);
        double l2 = cmd.zoo.hinge_l2;
        if (cmd.hinge_cv) {
            auto [model, chosen] = train_hinge_cv(view, cfg);
            l2 = chosen;
            report["hinge"]["chosen_l2"] = chosen;
        }
        const auto ens = train_hinge_ensemble(view, l2, cfg, cmd.votes);
        save_pair("hinge", ens, cfg.seed);
        report["hinge"]["l2"] = l2;
    }
    if (want("lmlp")) {
        SgdConfig cfg = cmd.zoo.lmlp_sgd;
        cfg.seed = derive_seed(cmd.common.seed, "zoo-lmlp", 0);
        const auto ens = train_mlp_ensemble(view, cmd.zoo.lmlp_hidden, cfg, cmd.votes);
        save_pair("lmlp", ens, cfg.seed);
    }
    if (report.empty()) throw UsageError("no known model kinds requested");

    std::ofstream rep(join_path(cmd.common.out, "train-report.json"));
    rep << report.dump(2) << '\n';

    Config echo;
    echo_common(echo, cmd.common, "train");
    echo.values["train.votes"] = std::to_string(cmd.votes);
    echo.values["train.iterations"] = std::to_string(cmd.zoo.scd01.iterations);
    echo.values["train.k_features"] = std::to_string(cmd.zoo.scd01.k_features);
    echo.values["train.hidden"] = std::to_string(cmd.zoo.mlp01_hidden);
    write_manifest(cmd.common.out, "train", echo);
}

// ---- eval -----------------------------------------------------------------

struct EvalCmd {
    CommonOpts common;
    std::vector<std::string> model_files;
    bool ova = false;
};

namespace detail {

template <typename Model>
bool try_ova_eval(const std::vector<ModelAny>& models, const Dataset& test,
                  nlohmann::json& report, std::vector<std::vector<std::string>>& rows) {
    OneVsAllModel<Model> ova;
    for (const auto& any : models) {
        if (auto* e = std::get_if<VoteEnsemble<Model>>(&any.value))
            ova.per_class.push_back(*e);
        else if (auto* s = std::get_if<Model>(&any.value))
            ova.per_class.push_back(VoteEnsemble<Model>{{*s}});
        else
            return false;
    }
    std::size_t hits = 0;
    for (std::size_t i = 0; i < test.n; ++i) {
        const OvaPrediction p = ova_predict(ova, test.row(i));
        hits += p.class_id == test.y[i];
        std::vector<std::string> row{std::to_string(i), std::to_string(test.y[i]),
                                     std::to_string(p.class_id)};
        for (double c : p.confidences) row.push_back(fmt_real(c));
        rows.push_back(std::move(row));
    }
    report["accuracy"] = static_cast<double>(hits) / static_cast<double>(test.n);
    report["classes"] = ova.per_class.size();
    return true;
}

}  // namespace detail

inline void run_eval(const EvalCmd& cmd) {
    if (cmd.model_files.empty()) throw UsageError("eval needs at least one model file");
    ensure_dir(cmd.common.out);
    const TaskData task = prepare_task(cmd.common);
    nlohmann::json report;

    if (cmd.ova) {
        std::vector<ModelAny> models;
        for (const auto& f : cmd.model_files) models.push_back(load_model(f));
        for (const auto& m : models)
            if (model_dim(m) != task.test.d)
                throw DataError("model dimension mismatch in " +
                                model_kind_name(m.kind));
        std::vector<std::vector<std::string>> rows;
        nlohmann::json ova_report;
        const bool ok =
            detail::try_ova_eval<LinearModel>(models, task.test, ova_report, rows) ||
            detail::try_ova_eval<Mlp01Model>(models, task.test, ova_report, rows) ||
            detail::try_ova_eval<HingeLinear>(models, task.test, ova_report, rows) ||
            detail::try_ova_eval<LogisticMlp>(models, task.test, ova_report, rows);
        if (!ok) throw UsageError("one-vs-all evaluation needs models of one kind");
        std::vector<std::string> header{"example", "label", "predicted"};
        for (std::size_t c = 0; c < cmd.model_files.size(); ++c)
            header.push_back("confidence_" + std::to_string(c));
        write_table_csv(join_path(cmd.common.out, "ova-eval.csv"), header, rows);
        report["ova"] = ova_report;
    } else {
        const BinaryView test = task.test_view();
        std::vector<std::vector<std::string>> rows;
        for (const auto& f : cmd.model_files) {
            const ModelAny m = load_model(f);
            if (model_dim(m) != test.dim())
                throw DataError("model dimension mismatch: " + f);
            const double acc = accuracy(predictor(m), test);
            rows.push_back({f, model_kind_name(m.kind), fmt_real(acc)});
            nlohmann::json entry;
            entry["file"] = f;
            entry["kind"] = model_kind_name(m.kind);
            entry["accuracy"] = acc;
            entry["seed"] = m.seed;
            report["models"].push_back(entry);
        }
        write_table_csv(join_path(cmd.common.out, "eval.csv"),
                        {"file", "kind", "accuracy"}, rows);
    }
    std::ofstream rep(join_path(cmd.common.out, "eval.json"));
    rep << report.dump(2) << '\n';

    Config echo;
    echo_common(echo, cmd.common, "eval");
    write_manifest(cmd.common.out, "eval", echo);
}

// ---- transfer matrix ------------------------------------------------------

struct TransferCmd {
    CommonOpts common;
    std::string models_dir;
    bool t01_votes = false;  // 01-loss target columns use the vote ensembles
    double epsilon = kEpsSynthetic;
};

inline void run_transfer(const TransferCmd& cmd) {
    ensure_dir(cmd.common.out);
    const TaskData task = prepare_task(cmd.common);
    const BinaryView test = task.test_view();

    auto load = [&](const std::string& kind, bool vote) {
        const std::string path =
            join_path(cmd.models_dir, model_file_name(kind, vote));
        if (!std::filesystem::exists(path))
            throw DataError("missing model file: " + path);
        ModelAny m = load_model(path);
        if (model_dim(m) != test.dim())
            throw DataError("model dimension mismatch: " + path);
        return m;
    };
    const ModelAny scd01 = load("scd01", false);
    const ModelAny mlp01 = load("mlp01", false);
    const ModelAny hinge = load("hinge", false);
    const ModelAny lmlp = load("lmlp", false);
    const ModelAny scd01_t = cmd.t01_votes ? load("scd01", true) : scd01;
    const ModelAny mlp01_t = cmd.t01_votes ? load("mlp01", true) : mlp01;

    // Table layout: rows = sources (clean first), columns = targets.
    const std::vector<std::pair<std::string, const ModelAny*>> sources{
        {"hinge", &hinge}, {"scd01", &scd01}, {"lmlp", &lmlp}, {"mlp01", &mlp01}};
    const std::vector<std::pair<std::string, const ModelAny*>> targets{
        {"hinge", &hinge}, {"scd01", &scd01_t}, {"lmlp", &lmlp}, {"mlp01", &mlp01_t}};

    AttackConfig acfg;
    acfg.epsilon = cmd.epsilon;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> clean_row{"clean"};
    for (const auto& [tname, tmodel] : targets) {
        (void)tname;
        clean_row.push_back(fmt_real(accuracy(predictor(*tmodel), test)));
    }
    rows.push_back(clean_row);
    for (std::size_t si = 0; si < sources.size(); ++si) {
        const auto& [sname, smodel] = sources[si];
        const Adversary adv =
            adversary_any(*smodel, acfg,
                          derive_seed(cmd.common.seed, "transfer-attack", si));
        const AdversarialBatch batch =
            make_adversarial_batch(adv, predictor(*smodel), test);
        std::vector<std::string> row{sname};
        for (const auto& [tname, tmodel] : targets) {
            (void)tname;
            row.push_back(fmt_real(accuracy_on(predictor(*tmodel), batch)));
        }
        rows.push_back(std::move(row));
    }
    write_table_csv(join_path(cmd.common.out, "transfer.csv"),
                    {"source", "hinge", "scd01", "lmlp", "mlp01"}, rows);

    Config echo;
    echo_common(echo, cmd.common, "transfer-matrix");
    echo.values["attack.epsilon"] = fmt_real(cmd.epsilon);
    echo.values["attack.t01_votes"] = cmd.t01_votes ? "true" : "false";
    echo.values["attack.models_dir"] = cmd.models_dir;
    write_manifest(cmd.common.out, "transfer-matrix", echo);
}

// ---- black box ------------------------------------------------------------

struct BlackboxCmd {
    CommonOpts common;
    std::vector<std::string> targets{"scd01", "mlp01", "hinge", "lmlp"};
    std::string substitute = "lmlp";  // or "scd01"
    std::size_t votes = 8;
    ZooSpec zoo;
    BlackBoxConfig bb;
};

inline BlackBoxTrace run_blackbox_against(const std::string& substitute,
                                          const TargetOracle& oracle,
                                          const Predictor& target_eval,
                                          const BinaryView& held_out,
                                          const BinaryView& test,
                                          const BlackBoxConfig& bb) {
    if (substitute == "lmlp") {
        return run_blackbox(oracle, target_eval, held_out, test, bb);
    }
    if (substitute == "scd01") {
        return run_blackbox_scd01_substitute(oracle, target_eval, held_out, test, bb);
    }
    throw UsageError("unknown substitute kind: " + substitute);
}

inline void run_blackbox_cmd(const BlackboxCmd& cmd) {
    ensure_dir(cmd.common.out);
    const TaskData task = prepare_task(cmd.common);
    const BinaryView train = task.train_view();
    const BinaryView test = task.test_view();

    ZooSpec zoo_spec = cmd.zoo;
    zoo_spec.votes = cmd.votes;
    const Zoo zoo = train_zoo(train, zoo_spec, cmd.common.seed);

    BlackBoxConfig bb = cmd.bb;
    bb.seed = derive_seed(cmd.common.seed, "blackbox", 0);
    bb.scd01_inner = cmd.zoo.scd01;
    bb.scd01_inner.seed = derive_seed(cmd.common.seed, "blackbox-sub", 0);

    struct Run {
        std::string target;
        Predictor predict;
        BlackBoxTrace trace;
    };
    std::vector<Run> runs;
    for (const auto& t : cmd.targets) {
        Run r;
        r.target = t;
        if (t == "scd01") r.predict = predictor(zoo.scd01);
        else if (t == "mlp01") r.predict = predictor(zoo.mlp01);
        else if (t == "hinge") r.predict = predictor(zoo.hinge);
        else if (t == "lmlp") r.predict = predictor(zoo.lmlp);
        else throw UsageError("unknown target kind: " + t);
        runs.push_back(std::move(r));
    }
    parallel_for(runs.size(), cmd.common.workers, [&](std::size_t i) {
        TargetOracle oracle;
        oracle.label_fn = runs[i].predict;
        oracle.dim = test.dim();
        runs[i].trace = run_blackbox_against(cmd.substitute, oracle, runs[i].predict,
                                             train, test, bb);
    });

    std::vector<std::vector<std::string>> summary;
    for (const auto& r : runs) {
        write_blackbox_trace_csv(
            join_path(cmd.common.out, "blackbox-" + r.target + ".csv"), r.trace);
        const auto& first = r.trace.records.front();
        const auto& last = r.trace.records.back();
        double min_adv = 1.0;
        for (std::size_t e = 1; e < r.trace.records.size(); ++e)
            min_adv = std::min(min_adv, r.trace.records[e].target_adv_accuracy);
        summary.push_back({r.target, fmt_real(first.target_adv_accuracy),
                           fmt_real(last.target_adv_accuracy), fmt_real(min_adv),
                           fmt_real(last.clean_match), fmt_real(last.adv_match),
                           std::to_string(last.queries)});
    }
    write_table_csv(join_path(cmd.common.out, "blackbox-summary.csv"),
                    {"target", "clean_accuracy", "final_adv_accuracy", "min_adv_accuracy",
                     "final_clean_match", "final_adv_match", "queries"},
                    summary);

    Config echo;
    echo_common(echo, cmd.common, "blackbox");
    echo.values["blackbox.substitute"] = cmd.substitute;
    echo.values["blackbox.epochs"] = std::to_string(cmd.bb.epochs);
    echo.values["blackbox.seed_set"] = std::to_string(cmd.bb.seed_set);
    echo.values["blackbox.epsilon"] = fmt_real(cmd.bb.epsilon);
    echo.values["blackbox.votes"] = std::to_string(cmd.votes);
    write_manifest(cmd.common.out, "blackbox", echo);
}

// ---- batch sweep ----------------------------------------------------------

struct SweepCmd {
    CommonOpts common;
    std::vector<double> fractions{0.05, 0.10, 0.25, 0.50, 0.75, 1.00};
    std::size_t iterations = 300;
    ZooSpec zoo;
};

inline void run_sweep(const SweepCmd& cmd) {
    ensure_dir(cmd.common.out);
    const TaskData task = prepare_task(cmd.common);
    const BinaryView train = task.train_view();
    const BinaryView test = task.test_view();

    std::vector<std::vector<std::string>> rows;
    for (std::size_t fi = 0; fi < cmd.fractions.size(); ++fi) {
        TrainConfig cfg = cmd.zoo.scd01;
        cfg.iterations = cmd.iterations;
        cfg.batch_fraction = cmd.fractions[fi];
        cfg.seed = derive_seed(cmd.common.seed, "sweep", fi);
        double best_obj = std::numeric_limits<double>::infinity();
        double best_test = 0.0;
        train_scd01(train, cfg,
                    [&](std::size_t it, const LinearModel& m, double full_obj) {
                        if (full_obj < best_obj) {
                            best_obj = full_obj;
                            best_test = accuracy(predictor(m), test);
                        }
                        rows.push_back({fmt_real(cmd.fractions[fi]),
                                        std::to_string(it + 1),
                                        fmt_real(1.0 - best_obj), fmt_real(best_test)});
                    });
    }
    write_table_csv(join_path(cmd.common.out, "sweep.csv"),
                    {"fraction", "iteration", "train_accuracy", "test_accuracy"}, rows);

    Config echo;
    echo_common(echo, cmd.common, "batch-sweep");
    echo.values["sweep.iterations"] = std::to_string(cmd.iterations);
    std::string fl;
    for (double f : cmd.fractions) fl += (fl.empty() ? "" : " ") + fmt_real(f);
    echo.values["sweep.fractions"] = fl;
    write_manifest(cmd.common.out, "batch-sweep", echo);
}

// ---- make-synthetic -------------------------------------------------------

struct MakeSynCmd {
    CommonOpts common;
    std::string preset;  // outlier-train|outlier-test|clean-train|clean-test|""
    SyntheticOutlierSpec spec;
    std::string file_name = "synthetic.csv";
};

inline SyntheticOutlierSpec resolve_preset(const std::string& preset,
                                           const SyntheticOutlierSpec& fallback) {
    if (preset.empty()) return fallback;
    if (preset == "outlier-train") return benchmark_outlier_spec(11);
    if (preset == "outlier-test") return benchmark_outlier_spec(12);
    if (preset == "clean-train") return benchmark_clean_spec(11);
    if (preset == "clean-test") return benchmark_clean_spec(12);
    throw UsageError("unknown preset: " + preset);
}

inline void run_make_synthetic(const MakeSynCmd& cmd) {
    ensure_dir(cmd.common.out);
    const SyntheticOutlierSpec spec = resolve_preset(cmd.preset, cmd.spec);
    const Dataset data = make_outlier_dataset(spec);
    save_csv(join_path(cmd.common.out, cmd.file_name), data);

    Config echo;
    echo_common(echo, cmd.common, "make-synthetic");
    echo.values["synthetic.dim"] = std::to_string(spec.dim);
    echo.values["synthetic.signal_dims"] = std::to_string(spec.signal_dims);
    echo.values["synthetic.separation"] = fmt_real(spec.separation);
    echo.values["synthetic.noise"] = fmt_real(spec.noise);
    echo.values["synthetic.count_per_class"] = std::to_string(spec.count_per_class);
    echo.values["synthetic.outliers"] = std::to_string(spec.outliers);
    echo.values["synthetic.outlier_displacement"] = fmt_real(spec.outlier_displacement);
    echo.values["synthetic.label_flip_fraction"] = fmt_real(spec.label_flip_fraction);
    echo.values["synthetic.pattern_seed"] = std::to_string(spec.pattern_seed);
    echo.values["synthetic.sample_seed"] = std::to_string(spec.seed);
    echo.values["synthetic.file"] = cmd.file_name;
    write_manifest(cmd.common.out, "make-synthetic", echo);
}

// ---- saturate -------------------------------------------------------------

struct SaturateCmd {
    CommonOpts common;
    std::string in_csv;
    std::string file_name = "saturated.csv";
    std::size_t label_column = 0;
    double p = 2.0;
};

inline void run_saturate(const SaturateCmd& cmd) {
    if (cmd.in_csv.empty()) throw UsageError("saturate needs an input csv");
    ensure_dir(cmd.common.out);
    const Dataset data = load_csv(cmd.in_csv, cmd.label_column);
    const Dataset out = saturate(data, cmd.p);
    save_csv(join_path(cmd.common.out, cmd.file_name), out);

    Config echo;
    echo_common(echo, cmd.common, "saturate");
    echo.values["saturate.input"] = cmd.in_csv;
    echo.values["saturate.p"] = fmt_real(cmd.p);
    echo.values["saturate.file"] = cmd.file_name;
    write_manifest(cmd.common.out, "saturate", echo);
}

}  // namespace zeroone
