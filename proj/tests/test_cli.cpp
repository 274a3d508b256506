#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "splitenum/cli.hpp"

using namespace splitenum;
using namespace splitenum::cli;
using grammars::GraphClassId;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result call(std::vector<std::string> args)
{
    args.insert(args.begin(), "splitenum");
    std::ostringstream out;
    std::ostringstream err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string lastLine(const std::string& text)
{
    auto end = text.find_last_not_of('\n');
    auto start = text.rfind('\n', end);
    return text.substr(start == std::string::npos ? 0 : start + 1, end - (start == std::string::npos ? 0 : start + 1) + 1);
}

double field(const nlohmann::json& report, const char* key) { return std::stod(report.at(key).get<std::string>()); }

} // namespace

TEST_CASE("enumerate")
{
    const auto r = call({"enumerate", "--class", "dh", "--flavor", "unlabeled", "--rooting", "unrooted", "--n", "18",
                         "--format", "bfile"});
    CHECK(r.code == kExitOk);
    CHECK(lastLine(r.out) == "18 60492629435");
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 18);

    const auto labeled = call({"enumerate", "--class", "3lp", "--flavor", "labeled", "--rooting", "unrooted", "--n", "12"});
    CHECK(labeled.code == kExitOk);
    CHECK(labeled.out.find("548713086352") != std::string::npos);

    const auto json = nlohmann::json::parse(call({"enumerate", "--class", "3lp", "--n", "20", "--format", "json"}).out);
    CHECK(json.at("class") == "3lp");
    CHECK(json.at("terms").size() == 20);
    CHECK(json.at("terms").back() == "212533216");
    CHECK(json.at("terms").front().is_string());
}

TEST_CASE("usage errors")
{
    CHECK(call({"enumerate", "--class", "dh", "--n", "0"}).code == kExitUsage);
    CHECK_FALSE(call({"enumerate", "--class", "dh", "--n", "0"}).err.empty());
    CHECK(call({"enumerate", "--n", "5"}).code == kExitUsage);
    CHECK(call({"enumerate", "--class", "k5", "--n", "5"}).code == kExitUsage);
    CHECK(call({"enumerate", "--class", "dh", "--n", "5", "--variant", "nope"}).code == kExitUsage);
    CHECK(call({"crosscheck", "--max-n", "9"}).code == kExitUsage);
    CHECK(call({"export", "--class", "dh", "--n", "9"}).code == kExitUsage);
    CHECK(call({"asymptotics", "--precision", "20"}).code == kExitUsage);
    CHECK(call({}).code == kExitUsage);
    CHECK(call({"frobnicate"}).code == kExitUsage);
    CHECK(call({"--help"}).code == kExitOk);
    CHECK(call({"enumerate", "--help"}).code == kExitOk);
}

TEST_CASE("bfile round trip")
{
    for (auto id : {GraphClassId::DH, GraphClassId::TLP})
        for (auto flavor : {grammars::Flavor::Labeled, grammars::Flavor::Unlabeled})
            for (auto rooting : {grammars::Rooting::Rooted, grammars::Rooting::Unrooted}) {
                const auto table = grammars::enumerate(id, flavor, rooting, 15);
                const auto text = formatTable(table, Format::Bfile);
                auto back = parseBfile("# comment\n\n" + text, id, flavor, rooting);
                CHECK(back.terms == table.terms);
                CHECK(back.meta.order == table.meta.order);
            }
    CHECK_THROWS(parseBfile("2 5\n", GraphClassId::DH, grammars::Flavor::Unlabeled, grammars::Rooting::Unrooted));
    CHECK_THROWS(parseBfile("1 x\n", GraphClassId::DH, grammars::Flavor::Unlabeled, grammars::Rooting::Unrooted));
}

TEST_CASE("output files")
{
    const auto path = std::filesystem::temp_directory_path() / "splitenum-test-cli.b";
    const auto r = call({"enumerate", "--class", "dh", "--n", "8", "--format", "bfile", "--output", path.string()});
    CHECK(r.code == kExitOk);
    CHECK(r.out.empty());
    std::ifstream in(path);
    std::stringstream text;
    text << in.rdbuf();
    CHECK(lastLine(text.str()) == "8 1484");
    std::filesystem::remove(path);

    CHECK(call({"enumerate", "--class", "dh", "--n", "3", "--output", "/nonexistent-dir/x"}).code == kExitFailure);
}

TEST_CASE("asymptotics")
{
    const auto r = call({"asymptotics", "--format", "json", "--digits", "12"});
    REQUIRE(r.code == kExitOk);
    const auto reports = nlohmann::json::parse(r.out);
    REQUIRE(reports.size() == 2);
    for (const auto& rep : reports) {
        const bool dh = rep.at("class") == "dh";
        CHECK(std::abs(field(rep, "gamma") - (dh ? 7.249751250 : 3.848442876)) <= 1e-9);
        CHECK(std::abs(field(rep, "unrooted_constant") - (dh ? 0.02337516194 : 0.70955825396)) <= 1e-11);
        CHECK(std::abs(field(rep, "c_prime")) < 1e-30);
        CHECK(std::abs(field(rep, "G_y")) < 1e-30);
    }
    const auto plain = call({"asymptotics", "--class", "3lp", "--digits", "10"});
    CHECK(plain.out.find("3.848442877") != std::string::npos);
}

TEST_CASE("crosscheck")
{
    const auto ok = call({"crosscheck", "--max-n", "6"});
    CHECK(ok.code == kExitOk);
    CHECK(ok.out.find("MISMATCH") == std::string::npos);
    CHECK(ok.out.find("3lp") != std::string::npos);

    const auto bad = call({"crosscheck", "--class", "dh", "--max-n", "5", "--variant", "mutant-sx-set"});
    CHECK(bad.code == kExitFailure);
    std::istringstream lines(bad.out);
    std::string line;
    bool mismatchAtFive = false;
    while (std::getline(lines, line))
        if (line.find("MISMATCH") != std::string::npos && line.find(" 5 ") != std::string::npos)
            mismatchAtFive = true;
    CHECK(mismatchAtFive);
}

TEST_CASE("export")
{
    const auto r = call({"export", "--class", "3lp", "--n", "6"});
    CHECK(r.code == kExitOk);
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 32);
}

TEST_CASE("identical flags give identical bytes")
{
    const std::vector<std::vector<std::string>> jobs = {
        {"enumerate", "--class", "dh", "--flavor", "labeled", "--rooting", "rooted", "--n", "30", "--format", "json"},
        {"crosscheck", "--class", "3lp", "--max-n", "6"},
        {"asymptotics", "--class", "dh"},
        {"export", "--class", "dh", "--n", "5"},
    };
    for (const auto& job : jobs) {
        const auto a = call(job);
        const auto b = call(job);
        CHECK(a.code == b.code);
        CHECK(a.out == b.out);
    }
}
