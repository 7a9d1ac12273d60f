// Label-only substitute attack against a hinge ensemble on the synthetic
// benchmark. The attacker never sees parameters: it trains a small logistic
// MLP on oracle labels, perturbs with FGSM, and grows its pool each epoch.

#include <cstdio>

#include "zeroone/experiment.hpp"

using namespace zeroone;

int main() {
    const TaskData task = load_task(TaskSpec{});
    const BinaryView train = task.train_view();
    const BinaryView test = task.test_view();

    ZooSpec spec;
    spec.votes = 4;
    const auto target =
        train_hinge_ensemble(train, spec.hinge_l2, [&] {
            SgdConfig c = spec.hinge_sgd;
            c.seed = derive_seed(1, "demo-hinge", 0);
            return c;
        }(), spec.votes);

    BlackBoxConfig bb;
    bb.epochs = 8;
    bb.seed_set = 60;
    bb.substitute_hidden = {40};
    bb.inner.epochs = 40;   // small pools need the extra passes
    bb.inner.batch = 60;
    bb.seed = derive_seed(1, "demo-blackbox", 0);

    TargetOracle oracle;
    oracle.label_fn = predictor(target);
    oracle.dim = test.dim();
    const BlackBoxTrace trace =
        run_blackbox(oracle, predictor(target), train, test, bb);

    std::printf("epoch  target-adv-acc  clean-match  adv-match  queries\n");
    for (const auto& r : trace.records)
        std::printf("%5zu  %14.3f  %11.3f  %9.3f  %7llu\n", r.epoch,
                    r.target_adv_accuracy, r.clean_match, r.adv_match,
                    static_cast<unsigned long long>(r.queries));
    std::printf("\nEpoch 0 is the clean baseline. The substitute needs only label\n"
                "queries (last column) to pull the target's accuracy down.\n");
    return 0;
}
