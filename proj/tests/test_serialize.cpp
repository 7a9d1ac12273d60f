#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <random>

#include "zeroone/serialize.hpp"

using namespace zeroone;
namespace fs = std::filesystem;

namespace {

LinearModel sample_linear() {
    LinearModel m;
    m.w = {0.25, -1.5, 3.75};
    m.w0 = -0.125;
    return m;
}

Mlp01Model sample_mlp01() {
    Mlp01Model m;
    m.d = 2;
    m.k = 3;
    m.W = {1, 2, 3, 4, 5, 6};
    m.W0 = {-1, 0, 1};
    m.w = {0.5, -0.5, 2};
    m.w0 = 0.75;
    return m;
}

HingeLinear sample_hinge() {
    HingeLinear m;
    m.w = {0.1, 0.2};
    m.w0 = 1.5;
    m.l2 = 1e-4;
    return m;
}

LogisticMlp sample_lmlp(bool multiclass) {
    LogisticMlp m;
    m.sizes = {2, 3, multiclass ? std::size_t{4} : std::size_t{1}};
    m.multiclass = multiclass;
    m.W = {std::vector<double>(6, 0.25), std::vector<double>(3 * m.sizes[2], -0.5)};
    m.b = {std::vector<double>(3, 0.0), std::vector<double>(m.sizes[2], 1.0)};
    return m;
}

}  // namespace

TEST_CASE("single models survive a round trip") {
    SECTION("linear") {
        const auto bytes = serialize_model(sample_linear(), 42);
        const ModelAny back = deserialize_model(bytes);
        REQUIRE(back.kind == ModelKind::scd01);
        REQUIRE(back.seed == 42);
        const auto& m = std::get<LinearModel>(back.value);
        REQUIRE(m.w == sample_linear().w);
        REQUIRE(m.w0 == sample_linear().w0);
        REQUIRE(model_dim(back) == 3);
    }
    SECTION("mlp01") {
        const auto bytes = serialize_model(sample_mlp01(), 7);
        const ModelAny back = deserialize_model(bytes);
        REQUIRE(back.kind == ModelKind::mlp01);
        const auto& m = std::get<Mlp01Model>(back.value);
        REQUIRE(m.d == 2);
        REQUIRE(m.k == 3);
        REQUIRE(m.W == sample_mlp01().W);
        REQUIRE(m.W0 == sample_mlp01().W0);
        REQUIRE(m.w == sample_mlp01().w);
        REQUIRE(m.w0 == sample_mlp01().w0);
        REQUIRE(model_dim(back) == 2);
    }
    SECTION("hinge") {
        const auto bytes = serialize_model(sample_hinge(), 9);
        const ModelAny back = deserialize_model(bytes);
        REQUIRE(back.kind == ModelKind::hinge);
        const auto& m = std::get<HingeLinear>(back.value);
        REQUIRE(m.w == sample_hinge().w);
        REQUIRE(m.w0 == sample_hinge().w0);
        REQUIRE(m.l2 == sample_hinge().l2);
    }
    SECTION("logistic mlp, both heads") {
        for (bool multi : {false, true}) {
            const auto bytes = serialize_model(sample_lmlp(multi), 11);
            const ModelAny back = deserialize_model(bytes);
            REQUIRE(back.kind == ModelKind::logistic_mlp);
            const auto& m = std::get<LogisticMlp>(back.value);
            REQUIRE(m.multiclass == multi);
            REQUIRE(m.sizes == sample_lmlp(multi).sizes);
            REQUIRE(m.W == sample_lmlp(multi).W);
            REQUIRE(m.b == sample_lmlp(multi).b);
            REQUIRE(model_dim(back) == 2);
        }
    }
}

TEST_CASE("ensembles serialize all members in order") {
    VoteEnsemble<LinearModel> e;
    e.members = {sample_linear(), sample_linear(), sample_linear()};
    e.members[1].w0 = 99.0;
    const auto bytes = serialize_model(e, 13);
    const ModelAny back = deserialize_model(bytes);
    REQUIRE(back.kind == ModelKind::ensemble_scd01);
    REQUIRE(back.seed == 13);
    const auto& parsed = std::get<VoteEnsemble<LinearModel>>(back.value);
    REQUIRE(parsed.members.size() == 3);
    REQUIRE(parsed.members[1].w0 == 99.0);
    REQUIRE(parsed.members[2].w == sample_linear().w);
    REQUIRE(model_dim(back) == 3);

    // predictor dispatch works through the variant
    const double x[3] = {0.5, 0.5, 0.5};
    REQUIRE(predictor(back)(x) == vote_predict(e, x).label);
}

TEST_CASE("serialization is byte deterministic") {
    REQUIRE(serialize_model(sample_mlp01(), 5) == serialize_model(sample_mlp01(), 5));
    REQUIRE(serialize_model(sample_mlp01(), 5) != serialize_model(sample_mlp01(), 6));
}

TEST_CASE("corrupt containers are rejected with specific errors") {
    const std::string good = serialize_model(sample_linear(), 1);

    SECTION("magic") {
        std::string bad = good;
        bad[0] = 'X';
        REQUIRE_THROWS_WITH(deserialize_model(bad),
                            Catch::Matchers::ContainsSubstring("magic"));
    }
    SECTION("version") {
        std::string bad = good;
        bad[8] = 9;  // little-endian version field
        REQUIRE_THROWS_WITH(deserialize_model(bad),
                            Catch::Matchers::ContainsSubstring("version"));
    }
    SECTION("unknown kind tag") {
        std::string bad = good;
        bad[12] = 77;
        REQUIRE_THROWS_WITH(deserialize_model(bad),
                            Catch::Matchers::ContainsSubstring("kind"));
    }
    SECTION("truncated") {
        const std::string bad = good.substr(0, good.size() - 4);
        REQUIRE_THROWS_AS(deserialize_model(bad), DataError);
    }
    SECTION("trailing bytes") {
        const std::string bad = good + "zz";
        REQUIRE_THROWS_WITH(deserialize_model(bad),
                            Catch::Matchers::ContainsSubstring("trailing"));
    }
    SECTION("absurd array length") {
        // header + huge w length
        std::string bad = good.substr(0, 24);
        detail::put_u64(bad, ~std::uint64_t{0});
        REQUIRE_THROWS_WITH(deserialize_model(bad),
                            Catch::Matchers::ContainsSubstring("length"));
    }
    SECTION("inconsistent mlp01 dims") {
        Mlp01Model m = sample_mlp01();
        m.W0.push_back(0.0);  // k+1 thresholds for k nodes
        const std::string bad = serialize_model(m, 2);
        REQUIRE_THROWS_WITH(deserialize_model(bad),
                            Catch::Matchers::ContainsSubstring("dims"));
    }
}

TEST_CASE("mixed ensembles are rejected") {
    // hand-build an ensemble container whose second member is a hinge model
    std::string bytes;
    detail::put_header(bytes, ModelKind::ensemble_scd01, 3);
    detail::put_u64(bytes, 2);
    bytes += serialize_model(sample_linear(), 3);
    bytes += serialize_model(sample_hinge(), 3);
    REQUIRE_THROWS_WITH(deserialize_model(bytes),
                        Catch::Matchers::ContainsSubstring("mixed"));

    std::string empty;
    detail::put_header(empty, ModelKind::ensemble_scd01, 3);
    detail::put_u64(empty, 0);
    REQUIRE_THROWS_WITH(deserialize_model(empty),
                        Catch::Matchers::ContainsSubstring("empty"));
}

TEST_CASE("save and load through files") {
    const fs::path dir =
        fs::temp_directory_path() /
        ("zeroone-ser-" + std::to_string(std::random_device{}()));
    fs::create_directories(dir);
    const std::string path = (dir / "m.model").string();

    save_model(path, sample_hinge(), 21);
    const ModelAny back = load_model(path);
    REQUIRE(back.kind == ModelKind::hinge);
    REQUIRE(back.seed == 21);
    REQUIRE(std::get<HingeLinear>(back.value).w == sample_hinge().w);

    REQUIRE_THROWS_WITH(load_model((dir / "missing.model").string()),
                        Catch::Matchers::ContainsSubstring("cannot"));
    fs::remove_all(dir);
}

TEST_CASE("kind names are stable identifiers") {
    REQUIRE(model_kind_name(ModelKind::scd01) == "scd01");
    REQUIRE(model_kind_name(ModelKind::mlp01) == "mlp01");
    REQUIRE(model_kind_name(ModelKind::hinge) == "hinge");
    REQUIRE(model_kind_name(ModelKind::logistic_mlp) == "lmlp");
    REQUIRE(model_kind_name(ModelKind::ensemble_scd01) == "scd01-vote");
    REQUIRE(model_kind_name(ModelKind::ensemble_mlp01) == "mlp01-vote");
    REQUIRE(model_kind_name(ModelKind::ensemble_hinge) == "hinge-vote");
    REQUIRE(model_kind_name(ModelKind::ensemble_logistic_mlp) == "lmlp-vote");
}

TEST_CASE("adversaries dispatch through the variant") {
    ModelAny any;
    any.kind = ModelKind::scd01;
    any.value = sample_linear();
    AttackConfig cfg;
    cfg.epsilon = 0.1;
    const double x[3] = {0.5, 0.5, 0.5};
    const auto xp = adversary_any(any, cfg, 0)(x, 1);
    REQUIRE(xp == attack_linear(sample_linear(), x, 1, cfg));

    ModelAny net;
    net.kind = ModelKind::mlp01;
    net.value = sample_mlp01();
    const double x2[2] = {0.5, 0.5};
    // deterministic given the embedded attack seed
    const auto a = adversary_any(net, cfg, 4)(x2, 1);
    const auto b = adversary_any(net, cfg, 4)(x2, 1);
    REQUIRE(a == b);
}
