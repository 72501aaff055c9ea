#include <cstdio>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "loewner/io.hpp"

using namespace loewner::io;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("atomic_write creates, overwrites, leaves no temp file") {
    const std::string path = "io_test_artifact.txt";
    atomic_write(path, "first\n");
    CHECK(slurp(path) == "first\n");
    atomic_write(path, "second\n");
    CHECK(slurp(path) == "second\n");
    CHECK(!std::ifstream(path + ".tmp").good());
    std::remove(path.c_str());
}

TEST_CASE("format_double roundtrips exactly") {
    for (double x : {0.0, 1.0, -0.75, 1.0 / 3.0, 1e-300, 6.02e23}) {
        CHECK(std::stod(format_double(x)) == x);
    }
    CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("CsvTable serialization") {
    CsvTable t;
    t.header = {"x", "y"};
    t.rows = {{1.0, 2.5}, {3.0, -0.125}};
    CHECK(t.to_string() == "x,y\n1,2.5\n3,-0.125\n");
}

TEST_CASE("envelope carries meta.version and data") {
    nlohmann::json meta = {{"command", "spectrum"}};
    nlohmann::json data = nlohmann::json::array({1, 2, 3});
    auto env = make_envelope(meta, data);
    CHECK(env["meta"]["command"] == "spectrum");
    CHECK(env["meta"]["version"] == version_string());
    CHECK(env["data"] == data);
    CHECK(!version_string().empty());
}
