// Experiment runner: training, evaluation, white-box transfer matrices,
// substitute-model black-box curves, batch-size sweeps, synthetic data, and
// feature saturation. Every command takes an explicit seed and writes its
// outputs plus a manifest under --out; reruns are byte-identical.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 internal error.

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "zeroone/commands.hpp"
#include "zeroone/version.hpp"

namespace {

void add_common(CLI::App* sub, zeroone::CommonOpts& c) {
    sub->add_option("--out", c.out, "output directory")->capture_default_str();
    sub->add_option("--seed", c.seed, "master seed")->capture_default_str();
    sub->add_option("--workers", c.workers, "concurrent work units")
        ->capture_default_str();
    sub->add_option("--task", c.task.name,
                    "task: outlier | clean | mnist01 | csv")
        ->capture_default_str();
    sub->add_option("--train-seed", c.task.train_seed, "synthetic train sample seed")
        ->capture_default_str();
    sub->add_option("--test-seed", c.task.test_seed, "synthetic test sample seed")
        ->capture_default_str();
    sub->add_option("--train-csv", c.task.train_csv, "train csv (task csv)");
    sub->add_option("--test-csv", c.task.test_csv, "test csv (task csv)");
    sub->add_option("--label-column", c.task.label_column, "csv label column")
        ->capture_default_str();
    sub->add_option("--mnist-dir", c.task.mnist_dir,
                    "directory with idx files (else ZEROONE_MNIST_DIR, else "
                    "data/mnist, else a generated stand-in)");
    sub->add_option("--mnist-train", c.task.mnist_train_count,
                    "train examples for the mnist01 task")
        ->capture_default_str();
    sub->add_option("--saturate-p", c.task.saturate_p,
                    "saturate features with this p (inf binarizes; 0 = off)")
        ->capture_default_str();
}

void add_zoo(CLI::App* sub, zeroone::ZooSpec& zoo) {
    sub->add_option("--iterations", zoo.scd01.iterations, "coordinate descent iterations")
        ->capture_default_str();
    sub->add_option("--batch-fraction", zoo.scd01.batch_fraction,
                    "per-class batch fraction")
        ->capture_default_str();
    sub->add_option("--eta", zoo.scd01.eta, "coordinate step size")
        ->capture_default_str();
    sub->add_option("--k-features", zoo.scd01.k_features,
                    "coordinates examined per iteration (clamped to dim)")
        ->capture_default_str();
    sub->add_option("--warm-fraction", zoo.scd01.balanced_warm_fraction,
                    "balanced-objective warm phase fraction (<0 = auto)")
        ->capture_default_str();
    sub->add_option("--hidden", zoo.mlp01_hidden, "mlp01 hidden nodes")
        ->capture_default_str();
    sub->add_option("--hinge-l2", zoo.hinge_l2, "hinge l2 weight")
        ->capture_default_str();
    sub->add_option("--hinge-rate", zoo.hinge_sgd.rate, "hinge learning rate")
        ->capture_default_str();
    sub->add_option("--hinge-epochs", zoo.hinge_sgd.epochs, "hinge epochs")
        ->capture_default_str();
    sub->add_option("--lmlp-hidden", zoo.lmlp_hidden, "logistic mlp hidden sizes")
        ->capture_default_str();
    sub->add_option("--lmlp-rate", zoo.lmlp_sgd.rate, "logistic mlp learning rate")
        ->capture_default_str();
    sub->add_option("--lmlp-epochs", zoo.lmlp_sgd.epochs, "logistic mlp epochs")
        ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"01-loss classifiers, convex baselines, and adversarial "
                 "transferability experiments"};
    app.set_version_flag("--version", zeroone::kLibraryVersion);
    app.set_config("--config", "",
                   "config file (sections named after subcommands, keys named "
                   "after long options)");
    app.require_subcommand(1);

    zeroone::TrainCmd train;
    CLI::App* sub_train = app.add_subcommand("train", "train models, write containers "
                                                      "and trace csvs");
    add_common(sub_train, train.common);
    add_zoo(sub_train, train.zoo);
    sub_train->add_option("--kinds", train.kinds,
                          "model kinds: scd01 mlp01 hinge lmlp | all")
        ->capture_default_str();
    sub_train->add_option("--votes", train.votes, "ensemble size (1 = single only)")
        ->capture_default_str();
    sub_train->add_flag("--hinge-cv", train.hinge_cv,
                        "cross-validate hinge l2 over {1e-5..1e-1}");

    zeroone::EvalCmd eval;
    CLI::App* sub_eval = app.add_subcommand("eval", "clean accuracy of saved models");
    add_common(sub_eval, eval.common);
    sub_eval->add_option("--models", eval.model_files, "model files")->required();
    sub_eval->add_flag("--ova", eval.ova,
                       "treat the model list as one-vs-all per-class ensembles");

    zeroone::TransferCmd transfer;
    CLI::App* sub_transfer =
        app.add_subcommand("transfer-matrix", "white-box source x target accuracy table");
    add_common(sub_transfer, transfer.common);
    sub_transfer->add_option("--models-dir", transfer.models_dir,
                             "directory holding <kind>.model files")
        ->required();
    sub_transfer->add_option("--epsilon", transfer.epsilon, "attack budget")
        ->capture_default_str();
    sub_transfer->add_flag("--t01-votes", transfer.t01_votes,
                           "use <kind>-vote.model ensembles as the 01-loss targets");

    zeroone::BlackboxCmd blackbox;
    CLI::App* sub_blackbox =
        app.add_subcommand("blackbox", "substitute-model attack epoch curves");
    add_common(sub_blackbox, blackbox.common);
    add_zoo(sub_blackbox, blackbox.zoo);
    sub_blackbox->add_option("--targets", blackbox.targets, "target ensemble kinds")
        ->capture_default_str();
    sub_blackbox->add_option("--substitute", blackbox.substitute,
                             "substitute kind: lmlp | scd01")
        ->capture_default_str();
    sub_blackbox->add_option("--votes", blackbox.votes,
                             "target ensemble size")
        ->capture_default_str();
    sub_blackbox->add_option("--epochs", blackbox.bb.epochs, "substitute epochs")
        ->capture_default_str();
    sub_blackbox->add_option("--seed-set", blackbox.bb.seed_set,
                             "initial oracle-labeled pool size")
        ->capture_default_str();
    sub_blackbox->add_option("--epsilon", blackbox.bb.epsilon, "attack budget")
        ->capture_default_str();
    sub_blackbox->add_option("--augment-step", blackbox.bb.augment_step,
                             "pool augmentation step (<0: use epsilon)")
        ->capture_default_str();
    sub_blackbox->add_option("--augment-batch", blackbox.bb.augment_batch,
                             "pool growth per epoch (0: seed-set size)")
        ->capture_default_str();
    sub_blackbox->add_option("--inner-epochs", blackbox.bb.inner.epochs,
                             "substitute fine-tuning passes per epoch")
        ->default_val(std::size_t{10});
    sub_blackbox->add_option("--inner-rate", blackbox.bb.inner.rate,
                             "substitute learning rate")
        ->capture_default_str();
    sub_blackbox->add_option("--inner-batch", blackbox.bb.inner.batch,
                             "substitute sgd batch")
        ->capture_default_str();
    sub_blackbox
        ->add_option("--substitute-hidden", blackbox.bb.substitute_hidden,
                     "substitute hidden layer sizes")
        ->capture_default_str();

    zeroone::SweepCmd sweep;
    CLI::App* sub_sweep =
        app.add_subcommand("batch-sweep", "train/test accuracy vs iteration per "
                                          "batch fraction");
    add_common(sub_sweep, sweep.common);
    sub_sweep->add_option("--fractions", sweep.fractions, "batch fractions")
        ->capture_default_str();
    sub_sweep->add_option("--iterations", sweep.iterations, "iterations per fraction")
        ->capture_default_str();

    zeroone::MakeSynCmd makesyn;
    CLI::App* sub_makesyn =
        app.add_subcommand("make-synthetic", "write a synthetic dataset csv");
    add_common(sub_makesyn, makesyn.common);
    sub_makesyn->add_option("--preset", makesyn.preset,
                            "outlier-train | outlier-test | clean-train | clean-test");
    sub_makesyn->add_option("--file", makesyn.file_name, "output csv name")
        ->capture_default_str();
    sub_makesyn->add_option("--dim", makesyn.spec.dim, "dimensions")
        ->capture_default_str();
    sub_makesyn->add_option("--signal-dims", makesyn.spec.signal_dims,
                            "pattern-carrying dimensions (0: all)")
        ->capture_default_str();
    sub_makesyn->add_option("--separation", makesyn.spec.separation,
                            "cluster center offset")
        ->capture_default_str();
    sub_makesyn->add_option("--noise", makesyn.spec.noise, "uniform noise half-width")
        ->capture_default_str();
    sub_makesyn->add_option("--count", makesyn.spec.count_per_class, "points per class")
        ->capture_default_str();
    sub_makesyn->add_option("--outliers", makesyn.spec.outliers, "mislabeled far points")
        ->capture_default_str();
    sub_makesyn->add_option("--displacement", makesyn.spec.outlier_displacement,
                            "outlier offset along the pattern")
        ->capture_default_str();
    sub_makesyn->add_option("--flip", makesyn.spec.label_flip_fraction,
                            "label flip fraction")
        ->capture_default_str();
    sub_makesyn->add_option("--pattern-seed", makesyn.spec.pattern_seed, "pattern seed")
        ->capture_default_str();
    sub_makesyn->add_option("--sample-seed", makesyn.spec.seed, "sample seed")
        ->capture_default_str();

    zeroone::SaturateCmd saturate;
    CLI::App* sub_saturate =
        app.add_subcommand("saturate", "push csv features toward {0,1}");
    add_common(sub_saturate, saturate.common);
    sub_saturate->add_option("--input", saturate.in_csv, "input csv")->required();
    sub_saturate->add_option("--p", saturate.p, "saturation exponent (inf binarizes)")
        ->required();
    sub_saturate->add_option("--file", saturate.file_name, "output csv name")
        ->capture_default_str();
    sub_saturate
        ->add_option("--input-label-column", saturate.label_column, "input label column")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*sub_train) zeroone::run_train(train);
        if (*sub_eval) zeroone::run_eval(eval);
        if (*sub_transfer) zeroone::run_transfer(transfer);
        if (*sub_blackbox) zeroone::run_blackbox_cmd(blackbox);
        if (*sub_sweep) zeroone::run_sweep(sweep);
        if (*sub_makesyn) zeroone::run_make_synthetic(makesyn);
        if (*sub_saturate) zeroone::run_saturate(saturate);
    } catch (const zeroone::UsageError& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 1;
    } catch (const zeroone::DataError& e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 3;
    }
    return 0;
}
