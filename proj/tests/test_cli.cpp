// End-to-end checks of the batch CLI: exit codes, JSON payloads, schema
// conformance, file artifacts. argv[1] = CLI binary, argv[2] = schema dir.
#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string g_cli;
std::string g_schemas;
fs::path g_tmp;

int run(const std::string& args) {
    const std::string cmd = g_cli + " " + args;
    return std::system(cmd.c_str());
}

json slurp(const fs::path& p) {
    std::ifstream in(p);
    if (!in.good()) throw std::runtime_error("missing file " + p.string());
    return json::parse(in);
}

// the subset of JSON Schema the published schemas use
bool validate(const json& schema, const json& value, std::string& why) {
    if (schema.contains("type")) {
        const std::string type = schema["type"];
        const bool ok = (type == "object" && value.is_object()) || (type == "array" && value.is_array()) ||
                        (type == "string" && value.is_string()) ||
                        (type == "integer" && value.is_number_integer()) ||
                        (type == "number" && value.is_number()) ||
                        (type == "boolean" && value.is_boolean());
        if (!ok) {
            why = "expected " + type + ", got " + std::string(value.type_name());
            return false;
        }
    }
    if (schema.contains("enum")) {
        bool hit = false;
        for (const json& option : schema["enum"]) hit = hit || option == value;
        if (!hit) {
            why = "value not in enum";
            return false;
        }
    }
    if (schema.contains("required")) {
        for (const json& key : schema["required"]) {
            if (!value.contains(key.get<std::string>())) {
                why = "missing required key " + key.get<std::string>();
                return false;
            }
        }
    }
    if (schema.contains("properties") && value.is_object()) {
        for (const auto& [key, sub] : schema["properties"].items()) {
            if (value.contains(key) && !validate(sub, value.at(key), why)) {
                why = key + ": " + why;
                return false;
            }
        }
    }
    if (schema.contains("items") && value.is_array()) {
        for (const json& element : value) {
            if (!validate(schema["items"], element, why)) return false;
        }
    }
    return true;
}

void check_schema(const char* name, const json& doc) {
    const json schema = slurp(fs::path(g_schemas) / (std::string(name) + ".schema.json"));
    std::string why;
    const bool ok = validate(schema, doc, why);
    INFO(name << " schema: " << why);
    CHECK(ok);
}

json run_json(const std::string& name, const std::string& args, int expect_exit = 0) {
    const fs::path out = g_tmp / (name + ".json");
    const int code = run(args + " --out " + out.string());
    REQUIRE(WEXITSTATUS(code) == expect_exit);
    return slurp(out);
}

}  // namespace

TEST_CASE("count emits the exact sequence values") {
    const json doc = run_json("count4", "count --k 4");
    CHECK(doc["result"]["tiling_count"] == "11047");
    CHECK(doc["result"]["half_bisector_fraction"]["exact"] == "49/82");
    CHECK(doc["result"]["subset_counts"]["both"] == "2401");
    CHECK(doc["result"]["boundary_count"] == "1568");
    CHECK(doc["header"]["subcommand"] == "count");
    CHECK(doc["meta"].contains("timestamp"));
    check_schema("count", doc);
}

TEST_CASE("gap finds the two-state value and validates") {
    const json doc = run_json("gap1", "gap --k 1 --chain edge --dense-check");
    const double gap = doc["result"]["report"]["gap"];
    CHECK(std::fabs(gap - 0.5) < 1e-9);
    CHECK(double(doc["result"]["dense_abs_diff"]) < 1e-8);
    check_schema("gap", doc);
}

TEST_CASE("gap recursion and lower bound flags") {
    const json doc = run_json("gap3", "gap --k 3 --chain edge --recursion --lower-bound");
    CHECK(doc["result"]["recursion"]["holds"] == true);
    CHECK(doc["result"]["lower_bound"]["holds"] == true);
    check_schema("gap", doc);
}

TEST_CASE("enumerate dumps canonical encodings and the flip graph") {
    const fs::path dump = g_tmp / "omega2.txt";
    const fs::path graph = g_tmp / "graph2.txt";
    const json doc = run_json(
        "enum2", "enumerate --k 2 --dump " + dump.string() + " --flip-graph " + graph.string() +
                     " --diameter");
    CHECK(doc["result"]["count"] == "7");
    CHECK(doc["result"]["flip_graph"]["edges"] == 8);
    CHECK(doc["result"]["flip_graph"]["diameter"] == 4);
    check_schema("enumerate", doc);

    std::ifstream lines(dump);
    std::string line;
    std::vector<std::string> encodings;
    while (std::getline(lines, line)) encodings.push_back(line);
    REQUIRE(encodings.size() == 7);
    CHECK(encodings.front() == "H(H(.,.),H(.,.))");
    CHECK(encodings.back() == "V(V(.,.),V(.,.))");
    CHECK(std::is_sorted(encodings.begin(), encodings.end()));

    std::ifstream edges(graph);
    int edge_lines = 0;
    while (std::getline(edges, line)) ++edge_lines;
    CHECK(edge_lines == 8);
}

TEST_CASE("enumerate boundary and upsilon subsets") {
    const json boundary = run_json("enumb", "enumerate --k 3 --set boundary");
    CHECK(boundary["result"]["count"] == "16");
    const json upsilon = run_json("enumu", "enumerate --k 4 --set upsilon");
    CHECK(upsilon["result"]["count"] == "196");
    const json streaming = run_json("enum5", "enumerate --k 5 --count-only");
    CHECK(streaming["result"]["count"] == "198860242");
}

TEST_CASE("couple reports bounds and the identity") {
    const json doc = run_json("couple2", "couple --k 2 --b 64 --exhaustive --formula-table");
    CHECK(doc["result"]["all_bounds_hold"] == true);
    CHECK(doc["result"]["distance_zero_iff_equal"] == true);
    CHECK(doc["result"]["cases"].contains("1a"));
    CHECK(doc["result"]["cases"]["1a"]["identity_holds"] == true);
    CHECK(doc["result"]["formula_table"].size() == 11);
    check_schema("couple", doc);
}

TEST_CASE("mix produces mixing time, sandwich, and a TV curve") {
    const fs::path curve = g_tmp / "curve2.csv";
    const json doc =
        run_json("mix2", "mix --k 2 --chain edge --sandwich --tmax 16 --curve " + curve.string());
    CHECK(doc["result"]["mixing_time"] == 12);
    CHECK(doc["result"]["sandwich"]["holds_natural"] == true);
    check_schema("mix", doc);
    std::ifstream in(curve);
    std::string header;
    std::getline(in, header);
    CHECK(header == "t,tv");
    int rows = 0;
    std::string line;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 17);
}

TEST_CASE("mix statistic Monte-Carlo route") {
    const json doc = run_json("mixstat", "mix --k 3 --stat-t 4 --samples 2000 --seed 9");
    CHECK(doc["result"]["statistic_tv"]["samples"] == 2000);
    CHECK(double(doc["result"]["statistic_tv"]["estimate"]) >= 0.0);
    check_schema("mix", doc);

    const fs::path curve = g_tmp / "stat_curve.csv";
    const json curved = run_json(
        "mixstatcurve",
        "mix --k 5 --stat-t 6 --stat-stride 2 --samples 500 --seed 9 --curve " + curve.string());
    CHECK(curved["result"]["statistic_curve"]["points"] == 4);  // t = 0, 2, 4, 6
    check_schema("mix", curved);
    std::ifstream in(curve);
    std::string header;
    std::getline(in, header);
    CHECK(header == "t,tv,ci");
}

TEST_CASE("sample writes deterministic trajectories and traces") {
    const fs::path trace = g_tmp / "trace.csv";
    const json a =
        run_json("samp1", "sample --k 2 --chain edge --steps 400 --seed 5 --trace " + trace.string());
    const json b = run_json("samp2", "sample --k 2 --chain edge --steps 400 --seed 5");
    CHECK(a["result"]["final"] == b["result"]["final"]);
    CHECK(a["result"]["start"] == "V(V(.,.),V(.,.))");
    check_schema("sample", a);
    std::ifstream in(trace);
    int rows = 0;
    std::string line;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 402);  // header + steps + 1
}

TEST_CASE("usage errors exit 2, guard violations exit 1") {
    CHECK(WEXITSTATUS(run("count > /dev/null 2>&1")) == 2);            // missing --k
    CHECK(WEXITSTATUS(run("bogus > /dev/null 2>&1")) == 2);            // unknown subcommand
    CHECK(WEXITSTATUS(run("enumerate --k 9 > /dev/null 2>&1")) == 1);  // size guard
    CHECK(WEXITSTATUS(run("count --k 99 > /dev/null 2>&1")) == 1);     // recurrence cap
}

int main(int argc, char** argv) {
    if (argc < 3) {
        std::fprintf(stderr, "usage: test_cli <cli-binary> <schema-dir>\n");
        return 1;
    }
    g_cli = argv[1];
    g_schemas = argv[2];
    g_tmp = fs::temp_directory_path() / "dyadic_cli_test";
    fs::create_directories(g_tmp);
    doctest::Context context;
    return context.run();
}
