#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct Result {
    int code = -1;
    std::string out;
};

// Runs the CLI with the given argument string; stderr is discarded.
Result rigsim(const std::string& args) {
    const std::string cmd = std::string(RIGSIM_CLI_PATH) + " " + args + " 2>/dev/null";
    Result r;
    FILE* pipe = ::popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    std::size_t got;
    while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
    const int status = ::pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

fs::path scratch(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() / ("rigsim-cli-" + std::to_string(::getpid()) + "-" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write(const fs::path& path, const std::string& text) { std::ofstream(path) << text; }

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

const char* kPetersen =
    "n 10\n0 1\n1 2\n2 3\n3 4\n0 4\n0 5\n1 6\n2 7\n3 8\n4 9\n5 7\n7 9\n6 9\n6 8\n5 8\n";

}  // namespace

TEST_CASE("check exit codes: yes, no, unresolved, input error") {
    const auto dir = scratch("check");
    write(dir / "c5.txt", "n 5\n0 1\n1 2\n2 3\n3 4\n0 4\n");
    write(dir / "petersen.txt", kPetersen);
    write(dir / "bad.txt", "n 3\n0 9\n");
    const std::string c5 = (dir / "c5.txt").string();
    const std::string pet = (dir / "petersen.txt").string();

    CHECK(rigsim("check " + c5 + " --property connected").code == 0);
    CHECK(rigsim("check " + c5 + " --property kconn:2").code == 0);
    CHECK(rigsim("check " + c5 + " --property kconn:3").code == 1);
    CHECK(rigsim("check " + c5 + " --property matching").code == 1);
    CHECK(rigsim("check " + c5 + " --property mindeg:2").code == 0);
    const auto ham = rigsim("check " + c5 + " --property hamilton --certificate");
    CHECK(ham.code == 0);
    CHECK_FALSE(ham.out.empty());
    CHECK(rigsim("check " + pet + " --property hamilton").code == 1);
    CHECK(rigsim("check " + pet + " --property hamilton --ham-exact-max-n 0 --ham-restarts 2").code == 2);
    CHECK(rigsim("check " + pet + " --property matching").code == 0);

    CHECK(rigsim("check " + (dir / "bad.txt").string() + " --property connected").code == 3);
    CHECK(rigsim("check " + (dir / "missing.txt").string() + " --property connected").code == 3);
    CHECK(rigsim("check " + c5 + " --property planar").code == 3);
    CHECK(rigsim("check " + c5 + " --property kconn:x").code == 3);
    fs::remove_all(dir);
}

TEST_CASE("gen output feeds check through stdin") {
    const auto gnp = rigsim("gen --model gnp -n 12 -p 1 --seed 3");
    REQUIRE(gnp.code == 0);
    CHECK(gnp.out.rfind("n 12\n", 0) == 0);
    CHECK(std::count(gnp.out.begin(), gnp.out.end(), '\n') == 1 + 66);

    const auto dir = scratch("gen");
    const auto path = (dir / "g.txt").string();
    REQUIRE(rigsim("gen --model rig -n 40 --alpha 1.5 -p 0.1 --seed 5 --with-features -o " + path).code == 0);
    const std::string text = slurp(path);
    CHECK(text.find("0:") != std::string::npos);
    const int connected = rigsim("check " + path + " --property connected").code;
    CHECK((connected == 0 || connected == 1));
    CHECK(rigsim("gen --model rig -n 40 --alpha 1.5 -p 0.1 --seed 5 --with-features").out == text);

    CHECK(rigsim("gen --model uniform -n 10 -m 20 -d 3 --seed 1").code == 0);
    CHECK(rigsim("gen --model gstar -n 6 --draws po:4 --seed 1").code == 0);
    CHECK(rigsim("gen --model gnp -n 5 -p 2").code == 3);
    CHECK(rigsim("gen --model blob -n 5 -p 0.5").code == 3);

    const std::string pipe = std::string("sh -c '") + RIGSIM_CLI_PATH +
                             " gen --model gnp -n 8 -p 1 | " + RIGSIM_CLI_PATH + " check - --property hamilton'";
    CHECK(std::system((pipe + " >/dev/null 2>&1").c_str()) == 0);
    fs::remove_all(dir);
}

TEST_CASE("tv and bound") {
    const auto same = rigsim("tv -n 4 po:1.3 po:1.3");
    CHECK(same.code == 0);
    CHECK(same.out == "tv 0\n");
    const auto two = rigsim("tv -n 2 gnp:0.1 gnp:0.4");
    CHECK(two.out == "tv 0.6\n");
    CHECK(rigsim("tv -n 7 gnp:0.1 gnp:0.4").code == 3);
    CHECK(rigsim("tv -n 3 gnp:0.1 nonsense").code == 3);

    const auto b = rigsim("bound --mean 100 -t 30");
    CHECK(b.code == 0);
    CHECK(b.out.find("bound=0.0334") != std::string::npos);
    CHECK(rigsim("bound --lambda 5 -t 2,3 --order 2").out.find("o(n^-2)") != std::string::npos);
    CHECK(rigsim("bound --tv-m 10 --tv-phat 0.1").out.find("bound=0.2") != std::string::npos);
    CHECK(rigsim("bound").code == 3);
    CHECK(rigsim("bound --mean 5 -t 0").code == 3);
}

TEST_CASE("sweep and couple subcommands") {
    const auto sw = rigsim("sweep -n 30 --alpha 1.5 --property connectivity --grid=-1,0,1 --samples 5 --seed 4");
    REQUIRE(sw.code == 0);
    CHECK(sw.out.rfind("model,n,m,alpha,k,omega,p,property,", 0) == 0);
    CHECK(std::count(sw.out.begin(), sw.out.end(), '\n') == 1 + 3 + 3);
    CHECK(rigsim("sweep -n 30 --alpha 1.5 --property connectivity --grid=-1,0,1 --samples 5 --seed 4 --threads 2")
              .out == sw.out);
    CHECK(rigsim("sweep -n 30 --alpha 1.5 --property connectivity --grid=1,0 --samples 5").code == 3);

    const auto cp = rigsim("couple -n 40 --alpha 2 --samples 4 --seed 2");
    REQUIRE(cp.code == 0);
    CHECK(cp.out.rfind("sample,success,failure_stage,regime,", 0) == 0);
    CHECK(std::count(cp.out.begin(), cp.out.end(), '\n') == 5);
    CHECK(rigsim("couple -n 40 --alpha 2 -p 0.5").code == 3);
}

TEST_CASE("preset and run") {
    const auto list = rigsim("preset --list");
    CHECK(list.code == 0);
    CHECK(list.out.find("theorem5\n") != std::string::npos);
    const auto t5 = rigsim("preset theorem5");
    REQUIRE(t5.code == 0);
    const auto doc = nlohmann::json::parse(t5.out);
    CHECK(doc["samples"] == 300);
    CHECK(rigsim("preset nope").code == 3);

    const auto dir = scratch("run");
    auto cfg = doc;
    cfg["n"] = 40;
    cfg["samples"] = 6;
    write(dir / "cfg.json", cfg.dump());
    const auto out1 = dir / "a";
    const auto r = rigsim("run " + (dir / "cfg.json").string() + " --out-dir " + out1.string());
    REQUIRE(r.code == 0);
    CHECK(fs::exists(out1 / "theorem5.csv"));
    CHECK(fs::exists(out1 / "theorem5.manifest.json"));

    const auto out2 = dir / "b";
    REQUIRE(rigsim("run " + (out1 / "theorem5.manifest.json").string() + " --out-dir " + out2.string()).code == 0);
    CHECK(slurp(out1 / "theorem5.csv") == slurp(out2 / "theorem5.csv"));

    const auto out3 = dir / "c";
    REQUIRE(rigsim("run " + (dir / "cfg.json").string() + " --seed 99 --out-dir " + out3.string()).code == 0);
    CHECK(slurp(out1 / "theorem5.csv") != slurp(out3 / "theorem5.csv"));
    const auto manifest = nlohmann::json::parse(slurp(out3 / "theorem5.manifest.json"));
    CHECK(manifest["seed"] == 99);

    const auto env_dir = dir / "env";
    const std::string env_cmd = "RIGSIM_OUTPUT_DIR=" + env_dir.string() + " " + RIGSIM_CLI_PATH + " run " +
                                (dir / "cfg.json").string() + " >/dev/null 2>&1";
    CHECK(std::system(env_cmd.c_str()) == 0);
    CHECK(fs::exists(env_dir / "theorem5.csv"));

    cfg["bogus"] = 1;
    write(dir / "bad.json", cfg.dump());
    CHECK(rigsim("run " + (dir / "bad.json").string() + " --out-dir " + out1.string()).code == 3);
    CHECK(rigsim("run").code == 3);
    fs::remove_all(dir);
}

TEST_CASE("usage errors exit with the input-error code") {
    CHECK(rigsim("").code == 3);
    CHECK(rigsim("frobnicate").code == 3);
    CHECK(rigsim("--version").code == 0);
    CHECK(rigsim("--help").code == 0);
}
