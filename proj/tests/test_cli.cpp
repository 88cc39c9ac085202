#include "catch_amalgamated.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;

namespace {

struct Result {
    int code = 0;
    std::string out, err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = kplab::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "kplab_cli_test";
    fs::create_directories(dir);
    return dir / name;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> v;
    std::istringstream is(text);
    for (std::string l; std::getline(is, l);) v.push_back(l);
    return v;
}

// data rows after the header line that starts with `header`
std::vector<std::vector<std::string>> csv_rows(const std::string& text, const std::string& header) {
    std::vector<std::vector<std::string>> rows;
    bool body = false;
    for (const auto& l : lines(text)) {
        if (!body) {
            body = l == header;
            continue;
        }
        std::vector<std::string> cells;
        std::istringstream is(l);
        for (std::string c; std::getline(is, c, ',');) cells.push_back(c);
        rows.push_back(cells);
    }
    REQUIRE(body);
    return rows;
}

}  // namespace

TEST_CASE("audit exit codes") {
    CHECK(run({"audit", "--model", "whitham"}).code == 0);
    const auto lin = run({"audit", "--model", "expr:k"});
    CHECK(lin.code == 1);
    CHECK_THAT(lin.out, ContainsSubstring("H1"));
    CHECK(run({"audit", "--model", "fkdv"}).code == 2);
    CHECK(run({"audit", "--model", "kdv"}).code == 2);
    CHECK(run({"audit"}).code == 2);
    CHECK(run({"audit", "--model", "fkdv", "--beta", "two"}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"audit", "--model", "bo", "-f", "json"}).code == 0);
}

TEST_CASE("collide output") {
    const auto w = run({"collide", "--model", "whitham", "--sigma", "1", "-k", "1", "--xi", "0"});
    REQUIRE(w.code == 0);
    const auto text = lines(w.out);
    CHECK(text[0].rfind("# config: ", 0) == 0);
    CHECK_THAT(w.out, ContainsSubstring("# verdict "));
    bool found = false;
    for (const auto& r : csv_rows(w.out, "p,q,xi,ell_sq,omega,kappa_p,kappa_q,dangerous")) {
        REQUIRE(r.size() == 8);
        if (std::abs(std::stod(r[3]) - 0.237896) < 1e-6) {
            found = true;
            CHECK(std::abs(std::stoi(r[0]) - std::stoi(r[1])) == 3);
            CHECK(r[7] == "1");
        }
    }
    CHECK(found);

    const auto f = run({"collide", "--model", "fkdv", "--beta", "2", "--sigma", "-1", "-k", "1", "--xi", "0"});
    REQUIRE(f.code == 0);
    found = false;
    for (const auto& r : csv_rows(f.out, "p,q,xi,ell_sq,omega,kappa_p,kappa_q,dangerous"))
        if (std::stod(r[3]) == 4.0) found = true;
    CHECK(found);

    const auto e = run({"collide", "--model", "fkdv", "--beta", "2", "--sigma", "1", "-k", "1", "--xi", "0"});
    REQUIRE(e.code == 0);
    CHECK(csv_rows(e.out, "p,q,xi,ell_sq,omega,kappa_p,kappa_q,dangerous").empty());

    CHECK(run({"collide", "--model", "bo", "--sigma", "2"}).code == 2);
    CHECK(run({"collide", "--model", "bo", "--xi", "0.7"}).code == 2);
    const auto js = run({"collide", "--model", "bo", "--sigma", "-1", "-f", "json"});
    CHECK(js.code == 0);
    CHECK(nlohmann::json::accept(js.out));
}

TEST_CASE("band exit codes") {
    CHECK(run({"band", "--model", "whitham", "--sigma", "1", "--context", "longwave"}).code == 3);
    CHECK(run({"band", "--model", "ilw", "--sigma", "1", "--context", "delta3"}).code == 3);
    CHECK(run({"band", "--model", "ilw", "--context", "bogus"}).code == 2);
    // small KP-II waves show no delta3 band at this amplitude
    const auto kp2 = run({"band", "--model", "fkdv", "--beta", "2", "--sigma", "-1", "-k", "1", "-a", "0.05", "--context",
                          "delta3", "-N", "16"});
    CHECK(kp2.code == 4);
    CHECK_FALSE(kp2.err.empty());
}

TEST_CASE("band report and plot") {
    const auto plot = scratch("bubble.svg");
    const auto trace = scratch("bubble.csv");
    fs::remove(plot);
    const auto r = run({"band", "--model", "ilw", "--sigma", "1", "-k", "1", "-a", "0.05", "--xi", "0.25", "--context",
                        "bloch01", "-N", "16", "--trace-points", "41", "--plot", plot.string(), "--trace",
                        trace.string()});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["config"]["command"].get<std::string>() == "band");
    const double ratio = j["report"]["agreement_ratio"];
    CHECK(ratio >= 0.75);
    CHECK(ratio <= 1.25);
    CHECK_THAT(j["prediction"]["center_ell_sq"].get<double>(), WithinAbs(0.032293, 1e-6));

    const std::string svg = slurp(plot);
    CHECK_THAT(svg, ContainsSubstring("width=\"800\""));
    CHECK_THAT(svg, ContainsSubstring("height=\"600\""));
    CHECK_THAT(svg, ContainsSubstring(">ell<"));
    CHECK_THAT(svg, ContainsSubstring("Re lambda"));
    CHECK_THAT(svg, ContainsSubstring("<metadata>"));
    CHECK(csv_rows(slurp(trace), "ell,re_lambda1,im_lambda1,re_lambda2,im_lambda2").size() == 41);

    const auto bare = run({"band", "--model", "ilw", "--sigma", "1", "-a", "0.05", "--xi", "0.25", "--context", "bloch01",
                           "-N", "16", "--trace-points", "41", "--plot"});
    REQUIRE(bare.code == 0);
    CHECK((bare.out.rfind("<svg", 0) == 0 || bare.out.rfind("<?xml", 0) == 0));
}

TEST_CASE("spectrum dumps") {
    const std::vector<std::string> base = {"spectrum", "--model", "whitham", "--sigma", "1", "-a", "0.05", "--ell", "0.5",
                                           "--xi", "0.1", "-N", "8"};
    auto csv_args = base;
    const auto c = run(csv_args);
    REQUIRE(c.code == 0);
    auto json_args = base;
    json_args.insert(json_args.end(), {"-f", "json"});
    const auto j = run(json_args);
    REQUIRE(j.code == 0);
    const auto rows = csv_rows(c.out, "index,re_lambda,im_lambda");
    const auto ev = nlohmann::json::parse(j.out)["eigenvalues"];
    REQUIRE(rows.size() == ev.size());
    CHECK(rows.size() == 17);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(std::stod(rows[i][1]) == ev[i][0].get<double>());
        CHECK(std::stod(rows[i][2]) == ev[i][1].get<double>());
    }

    const auto z = run({"spectrum", "--model", "fkdv", "--beta", "2", "--sigma", "-1", "--ell", "0.7", "-N", "8"});
    REQUIRE(z.code == 0);
    CHECK_THAT(z.out, ContainsSubstring("# dimension: 16\n"));
    const auto zr = csv_rows(z.out, "index,re_lambda,im_lambda");
    REQUIRE(zr.size() == 16);
    std::vector<double> ref;
    for (int n = -8; n <= 8; ++n)
        if (n != 0) ref.push_back(oracle::omega([](double x) { return 1.0 + x * x; }, -1, 1.0, 0.7, n));
    std::sort(ref.begin(), ref.end());
    for (std::size_t i = 0; i < ref.size(); ++i) CHECK_THAT(std::stod(zr[i][2]), WithinAbs(ref[i], 1e-12));

    CHECK(run({"spectrum", "--model", "bo", "-N", "2"}).code == 2);
}

TEST_CASE("scan output and determinism") {
    const std::vector<std::string> args = {"scan", "--model", "ilw", "--sigma", "1", "-a", "0.05", "--xi", "0.25", "0.5",
                                           "--ell-max", "0.3", "--ell-points", "7", "-N", "12"};
    const auto a = run(args);
    REQUIRE(a.code == 0);
    const auto rows = csv_rows(a.out, "ell,xi,max_real_part");
    CHECK(rows.size() == 14);
    bool unstable = false;
    for (const auto& r : rows) unstable = unstable || std::stod(r[2]) > 0.0;
    CHECK(unstable);

    ::setenv("KPLAB_THREADS", "3", 1);
    const auto b = run(args);
    ::unsetenv("KPLAB_THREADS");
    CHECK(a.out == b.out);

    auto svg_args = args;
    svg_args.insert(svg_args.end(), {"-f", "svg"});
    const auto s = run(svg_args);
    REQUIRE(s.code == 0);
    CHECK_THAT(s.out, ContainsSubstring("width=\"800\""));
    CHECK_THAT(s.out, ContainsSubstring("max Re lambda"));
}

TEST_CASE("numbers carry 17 significant digits") {
    const auto w = run({"wave", "--model", "whitham", "-a", "0.1", "-f", "csv"});
    REQUIRE(w.code == 0);
    const auto rows = csv_rows(w.out, "n,coefficient");
    REQUIRE(rows.size() >= 2);
    CHECK(rows[1][1] == "0.050000000000000003");
}

TEST_CASE("config round trip") {
    const auto json_out = scratch("scan.json");
    const auto csv_out = scratch("scan.csv");
    const auto svg_out = scratch("scan.svg");
    const std::vector<std::string> args = {"scan", "--model", "bo", "--sigma", "1", "-a", "0.03", "--xi", "0.2",
                                           "--ell-max", "0.4", "--ell-points", "5", "-N", "10"};
    for (const auto& p : {json_out, csv_out, svg_out}) {
        auto a = args;
        a.insert(a.end(), {"-o", p.string()});
        REQUIRE(run(a).code == 0);
    }
    const std::string reference = slurp(csv_out);
    for (const auto& p : {json_out, csv_out, svg_out}) {
        INFO(p);
        const auto again = run({"scan", "--config", p.string(), "-f", "csv"});
        REQUIRE(again.code == 0);
        CHECK(again.out == reference);
    }
    // flags override file values
    const auto over = run({"scan", "--config", csv_out.string(), "--ell-points", "3"});
    REQUIRE(over.code == 0);
    CHECK(csv_rows(over.out, "ell,xi,max_real_part").size() == 3);

    const auto bad = scratch("bad.json");
    std::ofstream(bad) << R"({"model": "bo", "warp": 9})";
    CHECK(run({"scan", "--config", bad.string()}).code == 2);
    std::ofstream(bad) << "not json";
    CHECK(run({"scan", "--config", bad.string()}).code == 2);
    CHECK(run({"scan", "--config", scratch("missing.json").string()}).code == 2);
}
