#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

namespace fs = std::filesystem;

namespace {

// Path of the command-line binary under test, supplied by the test harness.
std::string cli_path() {
    const char* p = std::getenv("PADLIN_CLI");
    REQUIRE_MESSAGE(p != nullptr,
                    "PADLIN_CLI must point at the built binary (ctest sets it)");
    return p;
}

int run_cli(const std::string& args) {
    const std::string cmd = "'" + cli_path() + "' " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& file) {
    std::ifstream in(file, std::ios::binary);
    REQUIRE_MESSAGE(in.good(), "missing file: " << file.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("padlin-cli-test-" + std::to_string(::getpid()) + "-" +
                std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string sub(const std::string& name) const { return (path / name).string(); }
    static inline int counter = 0;
};

} // namespace

TEST_CASE("cli: usage errors exit with code 1") {
    CHECK(run_cli("--version") == 0);
    CHECK(run_cli("") == 1);                  // a subcommand is required
    CHECK(run_cli("bounds --bogus-flag") == 1);
    CHECK(run_cli("frobnicate") == 1);        // unknown subcommand
}

TEST_CASE("cli: configuration errors exit with code 1") {
    TempDir tmp;
    CHECK(run_cli("bounds --config " + tmp.sub("missing.json")) == 1);

    std::ofstream(tmp.sub("bad.json")) << R"({"bogus": 1})";
    CHECK(run_cli("bounds --config " + tmp.sub("bad.json") + " --out " +
                  tmp.sub("out")) == 1);

    std::ofstream(tmp.sub("broken.json")) << "{";
    CHECK(run_cli("bounds --config " + tmp.sub("broken.json") + " --out " +
                  tmp.sub("out")) == 1);

    // --set with an unknown path is a configuration error too
    CHECK(run_cli("bounds --set nope=1 --out " + tmp.sub("out")) == 1);
}

TEST_CASE("cli: model errors exit with code 2") {
    TempDir tmp;
    // the spectral experiment hard-drives the amplifier past its invertible
    // range; the reject policy turns that into a runtime refusal
    CHECK(run_cli("psd --set pd.clamp=reject --out " + tmp.sub("out")) == 2);
}

TEST_CASE("cli: defaults run produces the documented files") {
    TempDir tmp;
    CHECK(run_cli("bounds --out " + tmp.sub("out")) == 0);
    CHECK(fs::exists(tmp.path / "out" / "bounds.csv"));
    CHECK(fs::exists(tmp.path / "out" / "meta.json"));
    const std::string csv = slurp(tmp.path / "out" / "bounds.csv");
    CHECK(csv.rfind("ebno_db,n,ber_bound,ser_bound\n", 0) == 0);
    const std::string meta = slurp(tmp.path / "out" / "meta.json");
    CHECK(meta.find("\"command\": \"bounds\"") != std::string::npos);
    CHECK(meta.find("\"config_fingerprint\"") != std::string::npos);
}

TEST_CASE("cli: the amplitude trace starts at zero input") {
    TempDir tmp;
    CHECK(run_cli("trace-hpa --out " + tmp.sub("out")) == 0);
    const std::string csv = slurp(tmp.path / "out" / "trace_hpa.csv");
    CHECK(csv.rfind("u,am_am,am_pm\n0,0,0\n", 0) == 0);
}

TEST_CASE("cli: --set overrides reach the engine and pick the curve") {
    TempDir tmp;
    // defaults keep the amplifier on: the curve is named for its back-off
    CHECK(run_cli("simulate --set modem.m=4 --set link.symbols_per_point=2000 "
                  "--set 'link.ebno_db=[8]' --out " +
                  tmp.sub("out")) == 0);
    CHECK(fs::exists(tmp.path / "out" / "ber_hpa_ibo5.csv"));
    const std::string meta = slurp(tmp.path / "out" / "meta.json");
    CHECK(meta.find("\"m\": 4") != std::string::npos);

    // disabling it yields the linear curve instead
    CHECK(run_cli("simulate --set modem.m=4 --set link.symbols_per_point=2000 "
                  "--set 'link.ebno_db=[8]' --set link.hpa_enabled=false --out " +
                  tmp.sub("lin")) == 0);
    CHECK(fs::exists(tmp.path / "lin" / "ber_linear.csv"));
}

TEST_CASE("cli: a repeated run is byte-identical") {
    TempDir tmp;
    const std::string args =
        "simulate --set modem.m=4 --set link.symbols_per_point=20000 "
        "--set 'link.ebno_db=[6, 8]' --set link.threads=3 --out ";
    CHECK(run_cli(args + tmp.sub("a")) == 0);
    CHECK(run_cli(args + tmp.sub("b")) == 0);

    int compared = 0;
    for (const auto& entry : fs::directory_iterator(tmp.path / "a")) {
        const fs::path other = tmp.path / "b" / entry.path().filename();
        CHECK(fs::exists(other));
        CHECK(slurp(entry.path()) == slurp(other));
        ++compared;
    }
    CHECK(compared >= 2); // at least the curve csv and the metadata
}
