#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "cnode/io.hpp"

using namespace cnode;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name, const std::string& content)
        : path("/tmp/cnode_io_" + name) {
        std::ofstream out(path);
        out << content;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

} // namespace

TEST_CASE("channel matrix CSV and JSON ingestion") {
    TempFile csv("m.csv", "2,0\n0,1\n");
    auto chan = read_channel_csv(csv.path, 0.5);
    CHECK(chan.matrix(0, 0) == 2.0);
    CHECK(chan.noise_variance == 0.5);

    TempFile js("m.json", R"({"matrix": [[1.0, 0.0],[0.0, 1.0]], "noise_variance": 2.0})");
    auto jchan = read_channel_json(js.path);
    CHECK(jchan.noise_variance == 2.0);
    auto overridden = read_channel_json(js.path, 3.0);
    CHECK(overridden.noise_variance == 3.0);

    TempFile bad("bad.csv", "1,2\n3\n");
    CHECK_THROWS_AS(read_channel_csv(bad.path, 1.0), InvalidInputError);
    TempFile rect("rect.csv", "1,2,3\n4,5,6\n");
    CHECK_THROWS_AS(read_channel_csv(rect.path, 1.0), InvalidInputError);
    CHECK_THROWS_AS(read_channel_csv("/nonexistent/file.csv", 1.0), InvalidInputError);
}

TEST_CASE("symbol JSON ingestion: gaussian and tabulated kinds") {
    TempFile g("sym_g.json", R"({"kind":"gaussian","gamma":1.5,"spread":2.0,"noise_psd":0.7})");
    auto m = read_symbol_json(g.path, 1.0, 1.0);
    CHECK(m.is_gaussian());
    CHECK(m.gamma() == 1.5);
    CHECK(m.spread() == 2.0);
    CHECK(m.noise_psd() == 0.7);

    TempFile t("sym_t.json", R"({"kind":"tabulated",
        "t_axis":[-8,-4,0,4,8],
        "omega_axis":[-8,-4,0,4,8],
        "values":[[0,0,0,0,0],[0,1e-14,1e-13,1e-14,0],[0,1e-13,1.0,1e-13,0],
                  [0,1e-14,1e-13,1e-14,0],[0,0,0,0,0]]})");
    auto tab = read_symbol_json(t.path, 1.0, 1.0);
    CHECK_FALSE(tab.is_gaussian());
    CHECK(tab.peak_squared() == 1.0);

    TempFile bad("sym_bad.json", R"({"kind":"wavelet"})");
    CHECK_THROWS_AS(read_symbol_json(bad.path, 1.0, 1.0), InvalidInputError);
}

TEST_CASE("sweep table CSV round trip is lossless at 17 digits") {
    SweepTable t;
    t.axis_name = "snr";
    t.columns = {"snr", "capacity", "node"};
    t.rows = {{1.0, 0.0, 0.0},
              {2.718281828459045, 0.5, 0.18393972058572117},
              {3.0, 1.0 / 3.0, 0.12345678901234567}};
    t.flags = {"boundary", "", "jump"};

    std::ostringstream os;
    write_sweep_csv(t, os);
    std::istringstream is(os.str());
    auto back = read_sweep_csv(is);

    CHECK(back.columns == t.columns);
    CHECK(back.flags == t.flags);
    REQUIRE(back.rows.size() == t.rows.size());
    for (size_t r = 0; r < t.rows.size(); ++r)
        for (size_t c = 0; c < t.rows[r].size(); ++c)
            CHECK(back.rows[r][c] == t.rows[r][c]); // bit-exact
}

TEST_CASE("sweep table JSON round trip") {
    SweepTable t;
    t.axis_name = "r";
    t.columns = {"r", "K"};
    t.rows = {{1.0, 0.18393972058572117}, {2.0, 4.0}};
    t.flags = {"", "jump"};
    std::ostringstream os;
    write_sweep_json(t, os);
    auto j = nlohmann::json::parse(os.str());
    CHECK(j["axis_name"] == "r");
    CHECK(j["columns"].size() == 2);

    std::istringstream is(os.str());
    auto back = read_sweep_json(is);
    CHECK(back.columns == t.columns);
    CHECK(back.flags == t.flags);
    CHECK(back.rows == t.rows); // lossless doubles
}

TEST_CASE("report serializers carry the documented fields") {
    ContinuousReport rep{0.5, 0.5, 0.18, 0.07, 0.43, 2.72};
    auto j = to_json(rep);
    for (const char* key : {"capacity", "count", "node", "mmse", "water_level", "snr"})
        CHECK(j.contains(key));

    WaterfillSolution sol;
    sol.water_level = 1.625;
    sol.active_count = 2;
    sol.powers = {1.375, 0.625};
    sol.snr = 1.625;
    auto wj = to_json(sol);
    CHECK(wj["active_count"] == 2);
    CHECK(wj["powers"].size() == 2);

    MmseReport mr{0.5, 1.0, 0.5, 2.0};
    auto mj = to_json(mr);
    CHECK(mj["node"] == 1.0);
    CHECK(mj["fisher_term"] == 0.5);
}

TEST_CASE("expand_range: inclusive grids") {
    auto g = expand_range("1:10:0.5");
    CHECK(g.size() == 19);
    CHECK(g.front() == 1.0);
    CHECK(g.back() == doctest::Approx(10.0));
    auto single = expand_range("2.5");
    CHECK(single.size() == 1);
    CHECK_THROWS_AS(expand_range("1:10:-1"), InvalidInputError);
    CHECK_THROWS_AS(expand_range("10:1:1"), InvalidInputError);
    CHECK_THROWS_AS(expand_range("a:b:c"), InvalidInputError);
}
