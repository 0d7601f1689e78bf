#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

std::string cli() {
    const char* path = std::getenv("OKSVM_CLI");
    REQUIRE_MESSAGE(path != nullptr, "OKSVM_CLI must point at the oksvm binary");
    return path;
}

int run(const std::string& args) {
    const std::string command = cli() + " " + args + " >/dev/null 2>&1";
    const int status = std::system(command.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path scratch() {
    auto dir = fs::temp_directory_path() / "oksvm_cli_test";
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

}  // namespace

TEST_CASE("usage errors exit with 1") {
    CHECK(run("") == 1);
    CHECK(run("frobnicate") == 1);
    CHECK(run("generate --dim") == 1);
    CHECK(run("generate --n-samples 3") == 1);
    CHECK(run("grid-fixed --cs x") == 1);
    CHECK(run("--help") == 0);
    CHECK(run("train --help") == 0);
}

TEST_CASE("data errors exit with 2") {
    const auto dir = scratch();
    CHECK(run("train --data " + (dir / "does-not-exist.csv").string()) == 2);
    std::ofstream(dir / "bad.csv") << "a,target\n1,1\n2,0\n";
    CHECK(run("train --data " + (dir / "bad.csv").string()) == 2);
}

TEST_CASE("strict mode reports unconverged solves with 3") {
    const auto dir = scratch();
    const auto data = (dir / "strict.csv").string();
    REQUIRE(run("generate --n-samples 60 --sep 0.5 --seed 2 --out " + data) == 0);
    CHECK(run("train --data " + data + " --max-iterations 1") == 0);
    CHECK(run("train --data " + data + " --max-iterations 1 --strict") == 3);
}

TEST_CASE("config file sets flags and the command line overrides it") {
    const auto dir = scratch();
    std::ofstream(dir / "gen.conf") << "# synthetic settings\nn_samples = 10\ndim=3\nseed=4\n";
    const auto a = (dir / "a.csv").string();
    const auto b = (dir / "b.csv").string();
    REQUIRE(run("generate --config " + (dir / "gen.conf").string() + " --out " + a) == 0);
    REQUIRE(run("generate --config " + (dir / "gen.conf").string() + " --dim 2 --out " + b) == 0);
    const auto ta = slurp(a);
    const auto tb = slurp(b);
    CHECK(ta.substr(0, ta.find('\n')) == "x0,x1,x2,label");
    CHECK(tb.substr(0, tb.find('\n')) == "x0,x1,label");
    CHECK(std::count(ta.begin(), ta.end(), '\n') == 11);

    std::ofstream(dir / "broken.conf") << "just words\n";
    CHECK(run("generate --config " + (dir / "broken.conf").string()) == 1);
}

TEST_CASE("train, save, predict") {
    const auto dir = scratch();
    const auto data = (dir / "train.csv").string();
    REQUIRE(run("generate --n-samples 80 --sep 1.4 --seed 5 --out " + data) == 0);
    const auto model = (dir / "model.txt").string();
    const auto trace = (dir / "trace.csv").string();
    REQUIRE(run("train --data " + data + " --model-out " + model + " --trace-out " + trace) == 0);
    CHECK(slurp(model).rfind("oksvm-model 1\n", 0) == 0);
    CHECK(slurp(trace).rfind("t,gamma,dual_value,eta,ws,event\n", 0) == 0);
    const auto scores = (dir / "scores.csv").string();
    REQUIRE(run("predict --model " + model + " --data " + data + " --out " + scores) == 0);
    const auto text = slurp(scores);
    CHECK(text.rfind("index,score,label\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 81);
}

TEST_CASE("iris binarization through the CLI") {
    const auto dir = scratch();
    const auto out = (dir / "iris_cv.csv").string();
    const std::string iris = std::string(OKSVM_TEST_DATA_DIR) + "/iris.csv";
    REQUIRE(run("cv --data " + iris +
                " --label-column class --positive-label Iris-virginica"
                " --keep-labels Iris-versicolor,Iris-virginica --cs 1.0 --gammas 0.5 --out " +
                out) == 0);
    const auto text = slurp(out);
    CHECK(text.find("iris,50,50,svm,acc,") != std::string::npos);
    CHECK(text.find("iris,50,50,oksvm,f1,") != std::string::npos);
}
