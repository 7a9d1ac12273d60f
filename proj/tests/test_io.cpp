#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "zeroone/csv_io.hpp"
#include "zeroone/idx_io.hpp"

using namespace zeroone;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("zeroone-io-" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Dataset byte_images(std::size_t n, std::size_t d) {
    Dataset data;
    data.n = n;
    data.d = d;
    data.normalized = false;
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> pix(0, 255);
    std::uniform_int_distribution<int> cls(0, 9);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) data.x.push_back(pix(rng));
        data.y.push_back(cls(rng));
    }
    return data;
}

}  // namespace

TEST_CASE("idx round trip preserves pixels and labels") {
    TempDir tmp;
    Dataset data = byte_images(11, 6);
    save_idx(tmp.file("img"), tmp.file("lab"), data, 2, 3);
    Dataset back = load_idx(tmp.file("img"), tmp.file("lab"));
    REQUIRE(back.n == data.n);
    REQUIRE(back.d == data.d);
    REQUIRE(back.x == data.x);
    REQUIRE(back.y == data.y);
    REQUIRE_FALSE(back.normalized);
}

TEST_CASE("idx loader reports the failing file") {
    TempDir tmp;
    Dataset data = byte_images(4, 4);
    save_idx(tmp.file("img"), tmp.file("lab"), data, 2, 2);

    SECTION("missing file") {
        REQUIRE_THROWS_WITH(load_idx(tmp.file("nope"), tmp.file("lab")),
                            Catch::Matchers::ContainsSubstring("cannot open"));
    }
    SECTION("swapped magic") {
        REQUIRE_THROWS_WITH(load_idx(tmp.file("lab"), tmp.file("img")),
                            Catch::Matchers::ContainsSubstring("magic mismatch"));
    }
    SECTION("count mismatch") {
        Dataset more = byte_images(5, 4);
        save_idx(tmp.file("img5"), tmp.file("lab5"), more, 2, 2);
        REQUIRE_THROWS_WITH(load_idx(tmp.file("img"), tmp.file("lab5")),
                            Catch::Matchers::ContainsSubstring("count mismatch"));
    }
    SECTION("truncated images") {
        std::string bytes = slurp(tmp.file("img"));
        std::ofstream cut(tmp.file("img"), std::ios::binary | std::ios::trunc);
        cut.write(bytes.data(), static_cast<std::streamsize>(bytes.size() - 3));
        cut.close();
        REQUIRE_THROWS_WITH(load_idx(tmp.file("img"), tmp.file("lab")),
                            Catch::Matchers::ContainsSubstring("truncated"));
    }
}

TEST_CASE("save_idx validates shape and ranges") {
    TempDir tmp;
    Dataset data = byte_images(3, 4);
    REQUIRE_THROWS_AS(save_idx(tmp.file("a"), tmp.file("b"), data, 3, 3), UsageError);
    data.x[0] = 300.0;
    REQUIRE_THROWS_AS(save_idx(tmp.file("a"), tmp.file("b"), data, 2, 2), DataError);
    data.x[0] = 4.0;
    data.y[0] = 999;
    REQUIRE_THROWS_AS(save_idx(tmp.file("a"), tmp.file("b"), data, 2, 2), DataError);
}

TEST_CASE("fmt_real round-trips doubles exactly") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (int i = 0; i < 2000; ++i) {
        const double v = u(rng);
        double back;
        REQUIRE(detail::parse_real(fmt_real(v), back));
        REQUIRE(back == v);
    }
    REQUIRE(fmt_real(0.5) == "0.5");
    REQUIRE(fmt_real(0.0) == "0");
    REQUIRE(fmt_real(-1.0) == "-1");
}

TEST_CASE("csv round trip preserves values exactly") {
    TempDir tmp;
    Dataset data;
    data.n = 5;
    data.d = 3;
    data.normalized = true;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::size_t i = 0; i < data.n * data.d; ++i) data.x.push_back(u(rng));
    data.y = {0, 1, 2, 1, 0};
    save_csv(tmp.file("d.csv"), data);
    Dataset back = load_csv(tmp.file("d.csv"), 0);
    REQUIRE(back.n == data.n);
    REQUIRE(back.d == data.d);
    REQUIRE(back.x == data.x);
    REQUIRE(back.y == data.y);
    REQUIRE(back.normalized);

    save_csv(tmp.file("d2.csv"), data);
    REQUIRE(slurp(tmp.file("d.csv")) == slurp(tmp.file("d2.csv")));
}

TEST_CASE("csv loader skips a header row and flags raw-valued data") {
    TempDir tmp;
    {
        std::ofstream out(tmp.file("h.csv"));
        out << "label,f1,f2\n";
        out << "1,0.5,0.25\n";
        out << "0,0.125,2.5\n";
    }
    Dataset data = load_csv(tmp.file("h.csv"), 0);
    REQUIRE(data.n == 2);
    REQUIRE(data.d == 2);
    REQUIRE(data.y == std::vector<int>{1, 0});
    REQUIRE_FALSE(data.normalized);  // 2.5 is outside [0,1]
}

TEST_CASE("csv loader can take the label from another column") {
    TempDir tmp;
    {
        std::ofstream out(tmp.file("t.csv"));
        out << "0.5,0.25,1\n";
        out << "0.75,1,0\n";
    }
    Dataset data = load_csv(tmp.file("t.csv"), 2);
    REQUIRE(data.d == 2);
    REQUIRE(data.y == std::vector<int>{1, 0});
    REQUIRE(data.x == std::vector<double>{0.5, 0.25, 0.75, 1.0});
}

TEST_CASE("csv loader names the offending row and column") {
    TempDir tmp;
    SECTION("ragged row") {
        std::ofstream out(tmp.file("r.csv"));
        out << "1,0.5,0.25\n1,0.5\n";
        out.close();
        REQUIRE_THROWS_WITH(load_csv(tmp.file("r.csv"), 0),
                            Catch::Matchers::ContainsSubstring("row 2"));
    }
    SECTION("non-numeric cell") {
        std::ofstream out(tmp.file("n.csv"));
        out << "1,0.5,0.25\n1,oops,0.25\n";
        out.close();
        REQUIRE_THROWS_WITH(load_csv(tmp.file("n.csv"), 0),
                            Catch::Matchers::ContainsSubstring("row 2 column 2"));
    }
    SECTION("fractional label") {
        std::ofstream out(tmp.file("f.csv"));
        out << "0.5,0.5,0.25\n";
        out.close();
        REQUIRE_THROWS_WITH(load_csv(tmp.file("f.csv"), 0),
                            Catch::Matchers::ContainsSubstring("label"));
    }
    SECTION("negative label") {
        std::ofstream out(tmp.file("g.csv"));
        out << "-1,0.5,0.25\n";
        out.close();
        REQUIRE_THROWS_AS(load_csv(tmp.file("g.csv"), 0), DataError);
    }
    SECTION("empty file") {
        std::ofstream out(tmp.file("e.csv"));
        out.close();
        REQUIRE_THROWS_WITH(load_csv(tmp.file("e.csv"), 0),
                            Catch::Matchers::ContainsSubstring("empty"));
    }
    SECTION("missing file") {
        REQUIRE_THROWS_WITH(load_csv(tmp.file("zz.csv"), 0),
                            Catch::Matchers::ContainsSubstring("cannot open"));
    }
}

TEST_CASE("write_table_csv emits header plus rows") {
    TempDir tmp;
    write_table_csv(tmp.file("t.csv"), {"a", "b"}, {{"1", "2"}, {"3", "4"}});
    REQUIRE(slurp(tmp.file("t.csv")) == "a,b\n1,2\n3,4\n");
}
