// End-to-end checks of the command-line pipeline and its exit-code contract:
// 0 success, 1 validation failure, 2 not a body, 3 input format error.
// The binary path arrives in FLAGRECON_BIN (set by CTest).

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string binary() {
    const char* env = std::getenv("FLAGRECON_BIN");
    REQUIRE_MESSAGE(env != nullptr, "FLAGRECON_BIN must point at the CLI binary");
    return env;
}

struct Workspace {
    fs::path dir;
    Workspace() {
        dir = fs::temp_directory_path() /
              ("flagrecon_cli_" + std::to_string(static_cast<unsigned>(::getpid())));
        fs::create_directories(dir);
    }
    ~Workspace() {
        std::error_code ec;
        fs::remove_all(dir, ec);
    }
    fs::path operator/(const std::string& name) const { return dir / name; }
};

int run(const std::string& args) {
    const std::string cmd = binary() + " " + args;
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("sphere synthesis validates cleanly") {
    Workspace ws;
    const auto flags = ws / "flags.json";
    const auto density = ws / "density.json";
    CHECK(run("synth --kind sphere --radius 1 --out-flags " + flags.string() +
              " --out-density " + density.string() + " > /dev/null") == 0);
    CHECK(fs::exists(flags));
    CHECK(fs::exists(density));
    CHECK(run("validate " + flags.string() + " --tol 1e-4 --report " +
              (ws / "report.json").string() + " > /dev/null") == 0);
    const json rep = json::parse(slurp(ws / "report.json"));
    CHECK(rep["max_residual"].get<double>() < 1e-4);
    CHECK(rep["frame_convention"] == "zcross-v1");
    const json dens = json::parse(slurp(density));
    CHECK(dens["body_valid"] == true);
}

TEST_CASE("harmonic synthesis is byte-for-byte reproducible") {
    Workspace ws;
    const auto d1 = ws / "d1.json";
    const auto d2 = ws / "d2.json";
    CHECK(run("synth --kind harmonic --lmax 4 --seed 7 --margin 0.1 --out-density " +
              d1.string() + " > /dev/null") == 0);
    CHECK(run("synth --kind harmonic --lmax 4 --seed 7 --margin 0.1 --out-density " +
              d2.string() + " > /dev/null") == 0);
    CHECK(slurp(d1) == slurp(d2));
}

TEST_CASE("outputs do not depend on the thread cap") {
    Workspace ws;
    const auto d1 = ws / "d1.json";
    const auto d2 = ws / "d2.json";
    CHECK(run("synth --kind harmonic --lmax 4 --seed 5 --margin 0.1 --out-density " +
              d1.string() + " > /dev/null") == 0);
    const std::string cmd = "FLAGRECON_THREADS=1 " + binary() +
                            " synth --kind harmonic --lmax 4 --seed 5 --margin 0.1 "
                            "--out-density " + d2.string() + " > /dev/null";
    REQUIRE(std::system(cmd.c_str()) == 0);
    CHECK(slurp(d1) == slurp(d2));
}

TEST_CASE("negative-margin densities are annotated as invalid") {
    Workspace ws;
    const auto density = ws / "bad.json";
    CHECK(run("synth --kind harmonic --lmax 4 --seed 7 --margin -0.05 --out-density " +
              density.string() + " > /dev/null") == 0);
    const json j = json::parse(slurp(density));
    CHECK(j["body_valid"] == false);
    CHECK(j["lindquist_margin"].get<double>() < 0.0);
}

TEST_CASE("forward then validate closes at the default tolerance") {
    Workspace ws;
    const auto density = ws / "h.json";
    const auto flags = ws / "flags.json";
    CHECK(run("synth --kind harmonic --lmax 4 --seed 21 --margin 0.1 --out-density " +
              density.string() + " > /dev/null") == 0);
    CHECK(run("forward " + density.string() + " --out " + flags.string() + " > /dev/null") == 0);
    CHECK(run("validate " + flags.string() + " --tol 5e-3 > /dev/null") == 0);
}

TEST_CASE("perturbed flag data fails validation with exit code 1") {
    Workspace ws;
    const auto flags = ws / "flags.json";
    CHECK(run("synth --kind harmonic --lmax 4 --seed 21 --margin 0.1 --out-flags " +
              flags.string() + " > /dev/null") == 0);
    json j = json::parse(slurp(flags));
    j["nodes"][100]["a0"] = j["nodes"][100]["a0"].get<double>() + 0.1;
    {
        std::ofstream out(flags);
        out << j.dump();
    }
    CHECK(run("validate " + flags.string() + " --tol 5e-3 --report " +
              (ws / "rep.json").string() + " > /dev/null") == 1);
    const json rep = json::parse(slurp(ws / "rep.json"));
    CHECK(rep["max_residual"].get<double>() >= 0.04);
}

TEST_CASE("reconstruct produces a density, a mesh and audit reports") {
    Workspace ws;
    const auto flags = ws / "flags.json";
    const auto out = ws / "out";
    CHECK(run("synth --kind sphere --radius 1 --out-flags " + flags.string() +
              " > /dev/null") == 0);
    CHECK(run("reconstruct " + flags.string() + " --out-dir " + out.string() +
              " --subdiv 2 > /dev/null") == 0);
    CHECK(fs::exists(out / "density.json"));
    CHECK(fs::exists(out / "report.json"));
    CHECK(fs::exists(out / "body.obj"));
    const std::string obj = slurp(out / "body.obj");
    CHECK(obj.rfind("v ", 0) == 0);
    CHECK(obj.find("\r") == std::string::npos);  // LF only
    const json rep = json::parse(slurp(out / "report.json"));
    CHECK(rep["body_valid"] == true);
    CHECK(rep["mesh"]["convexity_pass"] == true);
    CHECK(rep["mesh"]["symmetry_pass"] == true);
}

TEST_CASE("reconstruct refuses to mesh a non-body but still writes the density") {
    Workspace ws;
    const auto density = ws / "bad.json";
    const auto flags = ws / "flags.json";
    const auto out = ws / "out";
    CHECK(run("synth --kind harmonic --lmax 4 --seed 7 --margin -0.05 --out-density " +
              density.string() + " --out-flags " + flags.string() + " > /dev/null") == 0);
    CHECK(run("reconstruct " + flags.string() + " --out-dir " + out.string() +
              " > /dev/null 2> /dev/null") == 2);
    CHECK(fs::exists(out / "density.json"));
    CHECK(fs::exists(out / "report.json"));
    CHECK_FALSE(fs::exists(out / "body.obj"));
}

TEST_CASE("malformed input yields exit code 3") {
    Workspace ws;
    const auto bad = ws / "garbage.json";
    {
        std::ofstream out(bad);
        out << "{ this is not json";
    }
    CHECK(run("validate " + bad.string() + " 2> /dev/null") == 3);
    CHECK(run("validate " + (ws / "missing.json").string() + " 2> /dev/null") == 3);
    const auto scalar = ws / "scalar.json";
    {
        std::ofstream out(scalar);
        out << R"({"kind":"scalar_field","lmax":2,"coeffs":[[1,0,0.5]]})";
    }
    CHECK(run("forward " + scalar.string() + " --out " + (ws / "x.json").string() +
              " 2> /dev/null") == 3);
}

TEST_CASE("roundtrip reports the recovery metrics") {
    Workspace ws;
    const auto density = ws / "h.json";
    CHECK(run("synth --kind harmonic --lmax 4 --seed 3 --margin 0.1 --out-density " +
              density.string() + " > /dev/null") == 0);
    CHECK(run("roundtrip " + density.string() + " --samples 50 --report " +
              (ws / "metrics.json").string() + " > /dev/null") == 0);
    const json m = json::parse(slurp(ws / "metrics.json"));
    CHECK(m["consistency_max_residual"].get<double>() < 5e-3);
    CHECK(m["density_error_rel"].get<double>() < 2e-2);
    CHECK(m["flag_coeff_max_error"].get<double>() < 3e-2);
    CHECK(m["seed"] == 12345);
    CHECK(m["n_lat"] == 32);
}
