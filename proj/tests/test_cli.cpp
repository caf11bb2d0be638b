#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <fstream>
#include <sstream>

#include "qcomp/cli.hpp"
#include "qcomp/serialize.hpp"

using namespace qcomp;

namespace {

struct Outcome {
    int status;
    std::string out, err;
};

Outcome run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int s = run_command(args, out, err);
    return {s, out.str(), err.str()};
}

std::string data(const char* name) { return std::string(QCOMP_DATA_DIR) + "/" + name; }

std::string temp_file(const char* name, const std::string& content) {
    const std::string path = std::string(QCOMP_TEST_TMP) + "/" + name;
    std::ofstream(path) << content;
    return path;
}

} // namespace

TEST_CASE("verify passes on the identity instance") {
    const auto r = run({"verify", "--input", data("identity.json")});
    CHECK(r.status == 0);
    const Json j = parse_json(r.out);
    CHECK(j["pass"] == true);
    bool saw_error_equality = false;
    for (const auto& c : j["checks"])
        saw_error_equality = saw_error_equality || c["name"] == "error_equality[uniform]";
    CHECK(saw_error_equality);
}

TEST_CASE("verify rejects a perturbed image with the vertex as witness") {
    const auto r = run({"verify", "--input", data("or_gadget.json"), "--tree", data("or_gadget_corrupted.json")});
    CHECK(r.status == 1);
    const Json j = parse_json(r.out);
    CHECK(j["pass"] == false);
    bool edge_check = false;
    for (const auto& c : j["checks"])
        if (c["name"] == "answer_edge_laws") {
            edge_check = c["pass"] == false && c["vertex"] == 0;
        }
    CHECK(edge_check);
}

TEST_CASE("verify exit status tracks failures on random instances") {
    const auto ok = run({"verify", "--input", data("or_gadget.json"), "--nu", "points"});
    CHECK(ok.status == 0);
    const auto deg = run({"verify", "--input", data("irrelevant_bit.json")});
    CHECK(deg.status == 0);
}

TEST_CASE("transform emits tree, isomorphism and ledger") {
    const auto r = run({"transform", "--input", data("irrelevant_bit.json")});
    REQUIRE(r.status == 0);
    const Json j = parse_json(r.out);
    CHECK(j["tree"]["nodes"][0]["kind"] == "zmixer");
    CHECK(j["tree"]["nodes"][0]["alpha"] == "1/2");
    CHECK(j["ledger"][0]["case"] == "degenerate");
}

TEST_CASE("tight prints the exact advantage") {
    const auto r = run({"tight", "--n", "16", "--t", "3"});
    CHECK(r.status == 0);
    CHECK(r.out.find(",27/32,19/32,") != std::string::npos);
    const auto bad = run({"tight", "--n", "15", "--t", "3"});
    CHECK(bad.status == 2);
}

TEST_CASE("stats in both formats") {
    const auto j = run({"stats", "--input", data("or_gadget.json")});
    CHECK(j.status == 0);
    CHECK(parse_json(j.out)["error"] == "1/6");
    const auto c = run({"stats", "--input", data("or_gadget.json"), "--format", "csv"});
    CHECK(c.out.find("error,1/6,0.166666666667") != std::string::npos);
}

TEST_CASE("restrict and trim") {
    const auto r = run({"restrict", "--input", data("identity.json"), "--samples", "4"});
    CHECK(r.status == 0);
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 5);
    const auto t = run({"trim", "--input", data("identity.json"), "--block", "0", "--x", "1"});
    CHECK(t.status == 0);
    CHECK(parse_json(t.out)["pass"] == true);
    const auto bad_block = run({"trim", "--input", data("identity.json"), "--block", "1", "--x", "1"});
    CHECK(bad_block.status == 2);
}

TEST_CASE("hardest and paths") {
    const auto h = run({"hardest", "--g", data("identity.json")});
    REQUIRE(h.status == 0);
    CHECK(parse_json(h.out)["best"]["score"] == "4/1");
    const auto tr = run({"transform", "--input", data("identity.json")});
    const std::string tree = temp_file("identity_image.json", tr.out);
    const auto p = run({"paths", "--tree", tree, "--z", "1"});
    REQUIRE(p.status == 0);
    CHECK(parse_json(p.out).size() == 1);
}

TEST_CASE("usage and parse errors exit 2") {
    CHECK(run({}).status == 2);
    CHECK(run({"bogus"}).status == 2);
    CHECK(run({"transform"}).status == 2);
    CHECK(run({"transform", "--input", "/nonexistent.json"}).status == 2);
    CHECK(run({"transform", "--input", data("identity.json"), "--what"}).status == 2);
    const std::string bad = temp_file("bad.json", "{\n \"n\": 1,\n x\n}");
    const auto r = run({"transform", "--input", bad});
    CHECK(r.status == 2);
    CHECK(r.err.find("line 3") != std::string::npos);
    CHECK(run({"--help"}).status == 0);
}

TEST_CASE("out writes the artifact to a file") {
    const std::string path = std::string(QCOMP_TEST_TMP) + "/tight.csv";
    const auto r = run({"tight", "--n", "16", "--t", "3", "--out", path});
    CHECK(r.status == 0);
    CHECK(r.out.empty());
    std::ifstream in(path);
    std::stringstream s;
    s << in.rdbuf();
    CHECK(s.str().find("27/32") != std::string::npos);
}

TEST_CASE("seeded commands are byte-identical") {
    const std::vector<std::string> args{"tight", "--n", "64", "--t", "7", "--trials", "2000", "--seed", "9"};
    CHECK(run(args).out == run(args).out);
    const std::vector<std::string> v{"verify", "--input", data("or_gadget.json"), "--seed", "4"};
    CHECK(run(v).out == run(v).out);
}
