#include <catch2/catch_amalgamated.hpp>

#include <koszul/cli.hpp>

#include <cstdlib>
#include <sstream>
#include <string>

#include "support.hpp"

using namespace koszul;

namespace {

struct Run {
    int code = -1;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args)
{
    std::ostringstream out;
    std::ostringstream err;
    Run r;
    r.code = run_cli(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

nlohmann::json run_json(std::vector<std::string> args)
{
    args.push_back("--format");
    args.push_back("json");
    const Run r = run(args);
    INFO(r.err);
    REQUIRE(r.code != kExitInputError);
    return nlohmann::json::parse(r.out);
}

std::vector<std::size_t> betti_list(const nlohmann::json& cohomology, int below)
{
    std::vector<std::size_t> out;
    const auto& betti = cohomology.at("betti");
    for (int m = 0; m < below; ++m)
        out.push_back(betti.at(std::to_string(m)).get<std::size_t>());
    return out;
}

}  // namespace

TEST_CASE("validate")
{
    const Run ok = run({"validate", "--algebra", "su2", "--module", "exterior"});
    CHECK(ok.code == kExitPass);
    CHECK(ok.out.find("FAIL") == std::string::npos);

    const Run file = run({"validate", "--algebra", support::data_path("su2.json")});
    CHECK(file.code == kExitPass);

    const Run nonred = run({"validate", "--algebra", support::data_path("nonreductive.json")});
    CHECK(nonred.code == kExitFail);
    CHECK(nonred.out.find("NotReductive") != std::string::npos);

    const Run malformed = run({"validate", "--algebra", support::data_path("malformed.json")});
    CHECK(malformed.code == kExitInputError);
    CHECK(malformed.err.find("line 4") != std::string::npos);

    CHECK(run({"validate", "--algebra", "nonsense"}).code == kExitInputError);
    CHECK(run({"validate", "--module", "bogus"}).code == kExitInputError);
    CHECK(run({"validate", "--max-degree", "0"}).code == kExitInputError);
    CHECK(run({"duality", "--format", "xml"}).code == kExitInputError);
    CHECK(run({}).code == kExitInputError);
}

TEST_CASE("cohomology models")
{
    const auto inv = run_json({"cohomology", "--algebra", "su2", "--module", "exterior", "--model", "invariant",
                               "--max-degree", "4"});
    CHECK(betti_list(inv.at("report").at("cohomology"), 4) == std::vector<std::size_t>{1, 0, 0, 1});
    CHECK(inv.at("report").at("name").get<std::string>().find("invariant cohomology") != std::string::npos);

    const auto cart = run_json({"cohomology", "--algebra", "su2", "--model", "cartan", "--max-degree", "6"});
    CHECK(betti_list(cart.at("report").at("cohomology"), 6) == std::vector<std::size_t>{1, 0, 0, 0, 1, 0});
    CHECK(cart.at("report").at("name").get<std::string>().find("equivariant cohomology") != std::string::npos);

    const auto plain = run_json({"cohomology", "--algebra", "su2", "--module", "exterior", "--max-degree", "1"});
    const auto& betti = plain.at("report").at("cohomology").at("betti");
    CHECK(betti.size() == 1);
    CHECK(betti.at("0").get<std::size_t>() == 1);

    const Run text = run({"cohomology", "--algebra", "sl2", "--module", "exterior", "--max-degree", "4"});
    CHECK(text.code == kExitPass);
    CHECK(text.out.find("H^3 = 1") != std::string::npos);
}

TEST_CASE("weil-check and transgress")
{
    const Run w = run({"weil-check", "--algebra", "sl2", "--max-degree", "6"});
    CHECK(w.code == kExitPass);
    CHECK(w.out.find("(acyclic)") != std::string::npos);

    const Run t = run({"transgress", "--algebra", "su2"});
    CHECK(t.code == kExitPass);
    CHECK(t.out.find("ξ1 (degree 3)") != std::string::npos);
    CHECK(t.out.find(": yes") != std::string::npos);

    const auto j = run_json({"transgress", "--algebra", "su2xsu2", "--max-degree", "6"});
    CHECK(j.at("report").at("primitives").size() == 2);
    CHECK(j.at("status") == "pass");
}

TEST_CASE("duality")
{
    const Run su = run({"duality", "--algebra", "su2", "--module", "trivial", "--max-degree", "8"});
    CHECK(su.code == kExitPass);
    CHECK(su.out.find("verdict: pass") != std::string::npos);

    const Run ab = run({"duality", "--algebra", "abelian:2", "--module", "exterior", "--max-degree", "6"});
    CHECK(ab.code == kExitPass);

    const Run bad = run({"duality", "--algebra", "su2", "--module", "exterior", "--max-degree", "6",
                         "--corrupt-transgression"});
    CHECK(bad.code == kExitFail);
    CHECK(bad.out.find("defect at degree 3") != std::string::npos);
    CHECK(bad.out.find("verdict: fail") != std::string::npos);

    const auto j = run_json({"duality", "--algebra", "su2", "--module", "exterior", "--max-degree", "6",
                             "--corrupt-transgression"});
    CHECK(j.at("status") == "fail");
    CHECK_FALSE(j.at("report").at("psi").at("chain_map").at("defect").empty());
}

TEST_CASE("a module file behaves like the built-in module")
{
    const std::string file = "file:" + support::data_path("exterior_su2.json");
    const auto a = run_json({"duality", "--algebra", "su2", "--module", "exterior", "--max-degree", "6"});
    const auto b = run_json({"duality", "--algebra", "su2", "--module", file, "--max-degree", "6"});
    CHECK(a.at("report").at("betti") == b.at("report").at("betti"));
    CHECK(a.at("status") == b.at("status"));
    CHECK(run({"validate", "--algebra", "su2", "--module", file}).code == kExitPass);
    CHECK(run({"validate", "--algebra", "sl2", "--module", file}).code != kExitPass);
}

TEST_CASE("json reports round-trip")
{
    const auto j = run_json({"duality", "--algebra", "sl2", "--module", "exterior", "--max-degree", "6"});
    const auto report = duality_report_from_json(j.at("report"));
    CHECK(to_json(report) == j.at("report"));
    const RunConfig cfg = run_config_from_json(j.at("config"));
    CHECK(cfg.command == "duality");
    CHECK(cfg.algebra == "sl2");
    CHECK(cfg.max_degree == 6);
    CHECK(to_json(cfg) == j.at("config"));
}

TEST_CASE("output is deterministic")
{
    const std::vector<std::string> args{"duality", "--algebra", "su2", "--module", "exterior*forms:1",
                                        "--max-degree", "6", "--format", "json"};
    const Run first = run(args);
    const Run second = run(args);
    CHECK(first.out == second.out);

    ::setenv("KOSZUL_THREADS", "1", 1);
    const Run serial = run(args);
    ::setenv("KOSZUL_THREADS", "4", 1);
    const Run parallel = run(args);
    ::unsetenv("KOSZUL_THREADS");
    CHECK(serial.out == first.out);
    CHECK(parallel.out == first.out);
}
