// White-box transfer on the synthetic outlier benchmark: adversaries crafted
// against each source model are replayed against every target. Convex
// sources barely dent the 01-loss models, which is the asymmetry the library
// exists to demonstrate.

#include <cstdio>
#include <vector>

#include "zeroone/experiment.hpp"

using namespace zeroone;

namespace {

template <typename M>
Predictor pred(const M& m) {
    return [&m](const double* x) { return predict_one(m, x); };
}

}  // namespace

int main() {
    const TaskData task = load_task(TaskSpec{});
    const BinaryView train = task.train_view();
    const BinaryView test = task.test_view();
    std::printf("benchmark: train %zu x %zu, test %zu\n", train.size(),
                train.dim(), test.size());

    ZooSpec spec;
    spec.votes = 1;
    spec.scd01.iterations = 600;  // enough to settle on this data
    const Zoo zoo = train_zoo(train, spec, 1);

    AttackConfig acfg;
    acfg.epsilon = kEpsSynthetic;
    struct Row {
        const char* name;
        Adversary adv;
        Predictor self;
    };
    std::vector<Row> sources;
    sources.push_back({"hinge", adversary(zoo.hinge_single(), acfg),
                       pred(zoo.hinge_single())});
    sources.push_back({"lmlp", adversary(zoo.lmlp_single(), acfg),
                       pred(zoo.lmlp_single())});
    sources.push_back({"scd01", adversary(zoo.scd01_single(), acfg),
                       pred(zoo.scd01_single())});
    sources.push_back({"mlp01",
                       adversary(zoo.mlp01_single(), acfg, derive_seed(1, "attack", 3)),
                       pred(zoo.mlp01_single())});

    const std::vector<std::pair<const char*, Predictor>> targets{
        {"hinge", pred(zoo.hinge_single())},
        {"lmlp", pred(zoo.lmlp_single())},
        {"scd01", pred(zoo.scd01_single())},
        {"mlp01", pred(zoo.mlp01_single())}};

    std::printf("\n%-8s", "source");
    for (const auto& [name, ignored] : targets) {
        (void)ignored;
        std::printf("  %6s", name);
    }
    std::printf("\n%-8s", "clean");
    for (const auto& [name, p] : targets) {
        (void)name;
        std::printf("  %6.3f", accuracy(p, test));
    }
    std::printf("\n");
    for (const auto& src : sources) {
        const AdversarialBatch batch = make_adversarial_batch(src.adv, src.self, test);
        std::printf("%-8s", src.name);
        for (const auto& [name, p] : targets) {
            (void)name;
            std::printf("  %6.3f", accuracy_on(p, batch));
        }
        std::printf("\n");
    }
    std::printf("\nRows are attack sources at eps %.4f, columns are targets;\n"
                "entries are target accuracy on the source's adversaries.\n",
                acfg.epsilon);
    return 0;
}
