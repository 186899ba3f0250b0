#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

// End-to-end tests driving the installed binary as a subprocess. The harness
// provides FAIRAUDIT_BIN (binary under test) and FAIRAUDIT_ROOT (repository
// root, whose data/ directory holds the fetched raw datasets).

#include "json.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

std::string bin_path() {
    const char* bin = std::getenv("FAIRAUDIT_BIN");
    REQUIRE_MESSAGE(bin != nullptr, "FAIRAUDIT_BIN must point at the CLI binary");
    return bin;
}

std::string root_path() {
    const char* root = std::getenv("FAIRAUDIT_ROOT");
    REQUIRE_MESSAGE(root != nullptr, "FAIRAUDIT_ROOT must point at the repo root");
    return root;
}

struct TempDir {
    fs::path path;
    explicit TempDir(const char* tag) {
        path = fs::temp_directory_path() / (std::string("fairaudit_cli_") + tag);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

struct Outcome {
    int code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return {};
    return std::string(std::istreambuf_iterator<char>(in), {});
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    REQUIRE(bool(out));
    out << content;
}

/// Run `fairaudit <args>` capturing exit code, stdout, and stderr.
Outcome run_cli(const std::string& args) {
    static int counter = 0;
    fs::path dir = fs::temp_directory_path() / "fairaudit_cli_io";
    fs::create_directories(dir);
    fs::path out_file = dir / ("out" + std::to_string(counter));
    fs::path err_file = dir / ("err" + std::to_string(counter));
    ++counter;

    std::string cmd = "'" + bin_path() + "' " + args + " > '" + out_file.string() +
                      "' 2> '" + err_file.string() + "'";
    int status = std::system(cmd.c_str());

    Outcome outcome;
    outcome.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    outcome.out = slurp(out_file);
    outcome.err = slurp(err_file);
    fs::remove(out_file);
    fs::remove(err_file);
    return outcome;
}

const char* kTinyAdult =
    "39, State-gov, 77516, Bachelors, 13, Never-married, Adm-clerical,"
    " Not-in-family, White, Male, 2174, 0, 40, United-States, <=50K\n"
    "50, Self-emp-not-inc, 83311, Bachelors, 13, Married-civ-spouse,"
    " Exec-managerial, Husband, White, Male, 0, 0, 13, United-States, >50K\n"
    "38, Private, 215646, HS-grad, 9, Divorced, Handlers-cleaners,"
    " Not-in-family, White, Female, 0, 0, 40, United-States, <=50K\n"
    "53, Private, 234721, 11th, 7, Married-civ-spouse, Handlers-cleaners,"
    " Husband, Black, Male, 0, 0, 40, United-States, >50K.\n"
    "28, Private, 338409, Bachelors, 13, Married-civ-spouse, Prof-specialty,"
    " Wife, Black, Female, 0, 0, 40, Cuba, <=50K\n"
    "37, ?, 284582, Masters, 14, Married-civ-spouse, Exec-managerial,"
    " Wife, White, Female, 0, 0, 40, United-States, <=50K\n"
    "49, Private, 160187, 9th, 5, Married-spouse-absent, Other-service,"
    " Not-in-family, Black, Female, 0, 0, 16, Jamaica, >50K\n"
    "52, Self-emp-not-inc, 209642, HS-grad, 9, Married-civ-spouse,"
    " Exec-managerial, Husband, White, Male, 0, 0, 45, United-States, <=50K\n";

const char* kTinyPrepared =
    "f0,f1,label,protected,weight\n"
    "0.5,1,1,1,1\n"
    "0.25,0,1,1,1\n"
    "-0.5,1,0,1,1\n"
    "1.5,0,1,0,1\n"
    "-1.25,1,0,0,1\n"
    "-0.75,0,0,0,1\n";

const char* kTinyPredictions =
    "pred,label,protected,weight\n"
    "1,1,1,1\n"
    "1,0,1,1\n"
    "0,1,1,1\n"
    "1,1,0,1\n"
    "0,0,0,1\n"
    "0,1,0,1\n";

} // namespace

TEST_CASE("argument errors exit with code 1") {
    CHECK(run_cli("").code == 1);
    CHECK(run_cli("frobnicate").code == 1);
    CHECK(run_cli("audit").code == 1); // missing required positional
    CHECK(run_cli("run --no-such-flag").code == 1);
    CHECK(run_cli("prepare --dataset adult").code == 1); // --protected required
}

TEST_CASE("--help exits 0 and lists the subcommands") {
    Outcome help = run_cli("--help");
    CHECK(help.code == 0);
    for (const char* name : {"fetch", "prepare", "reweigh", "audit", "run", "sweep"})
        CHECK(help.out.find(name) != std::string::npos);
}

TEST_CASE("audit prints the six metrics") {
    TempDir dir("audit");
    write_file(dir.path / "preds.csv", kTinyPredictions);

    Outcome text = run_cli("audit '" + (dir.path / "preds.csv").string() + "'");
    CHECK(text.code == 0);
    for (const char* label :
         {"balanced accuracy", "statistical parity diff", "average odds diff",
          "disparate impact", "equal opportunity diff", "theil index"})
        CHECK(text.out.find(label) != std::string::npos);

    Outcome json = run_cli("audit --json '" + (dir.path / "preds.csv").string() + "'");
    CHECK(json.code == 0);
    auto doc = nlohmann::json::parse(json.out);
    // hand check: priv selects 2/3, unpriv 1/3 -> DI = 0.5, SPD = -1/3
    CHECK(doc["di"].get<double>() == doctest::Approx(0.5));
    CHECK(doc["spd"].get<double>() == doctest::Approx(-1.0 / 3.0));
    CHECK(doc["ba"].is_number());
    CHECK(doc["ti"].is_number());

    // the weight column is optional
    write_file(dir.path / "nw.csv", "pred,label,protected\n1,1,1\n0,0,1\n1,0,0\n0,1,0\n");
    CHECK(run_cli("audit '" + (dir.path / "nw.csv").string() + "'").code == 0);
}

TEST_CASE("audit data errors exit with code 2") {
    TempDir dir("auditbad");
    CHECK(run_cli("audit '" + (dir.path / "missing.csv").string() + "'").code == 2);

    write_file(dir.path / "cols.csv", "a,b\n1,2\n");
    Outcome cols = run_cli("audit '" + (dir.path / "cols.csv").string() + "'");
    CHECK(cols.code == 2);
    CHECK(cols.err.find("pred,label,protected") != std::string::npos);

    write_file(dir.path / "val.csv", "pred,label,protected\n2,1,1\n");
    CHECK(run_cli("audit '" + (dir.path / "val.csv").string() + "'").code == 2);

    write_file(dir.path / "w.csv", "pred,label,protected,weight\n1,1,1,heavy\n");
    CHECK(run_cli("audit '" + (dir.path / "w.csv").string() + "'").code == 2);
}

TEST_CASE("prepare encodes a raw adult table") {
    TempDir dir("prepare");
    write_file(dir.path / "raw.csv", kTinyAdult);
    fs::path out = dir.path / "prepared.csv";

    Outcome res = run_cli("prepare --dataset adult --protected race --input '" +
                          (dir.path / "raw.csv").string() + "' --out '" + out.string() +
                          "' --no-standardize");
    CHECK(res.code == 0);
    // the '?' row is dropped: 7 of 8 rows survive
    CHECK(res.out.find("7 rows") != std::string::npos);
    REQUIRE(fs::exists(out));

    std::string content = slurp(out);
    CHECK(content.find("age,") == 0);
    CHECK(content.find("workclass=Private") != std::string::npos);
    CHECK(content.find("label,protected,weight") != std::string::npos);
    // unstandardized: the first data row keeps its raw age of 39
    CHECK(content.find("\n39,") != std::string::npos);

    // standardized by default: raw ages no longer appear
    fs::path out_std = dir.path / "prepared_std.csv";
    Outcome std_res = run_cli("prepare --dataset adult --protected sex --input '" +
                              (dir.path / "raw.csv").string() + "' --out '" +
                              out_std.string() + "'");
    CHECK(std_res.code == 0);
    CHECK(slurp(out_std).find("\n39,") == std::string::npos);
}

TEST_CASE("prepare rejects unknown names with code 1 and bad files with code 2") {
    TempDir dir("preparebad");
    write_file(dir.path / "raw.csv", kTinyAdult);
    CHECK(run_cli("prepare --dataset census --protected race --input '" +
                  (dir.path / "raw.csv").string() + "'").code == 1);
    CHECK(run_cli("prepare --dataset adult --protected age --input '" +
                  (dir.path / "raw.csv").string() + "'").code == 1);
    CHECK(run_cli("prepare --dataset adult --protected race --input '" +
                  (dir.path / "nope.csv").string() + "'").code == 2);

    write_file(dir.path / "short.csv", "1,2,3\n");
    CHECK(run_cli("prepare --dataset adult --protected race --input '" +
                  (dir.path / "short.csv").string() + "'").code == 2);
}

TEST_CASE("reweigh rewrites weights and reports the four factors") {
    TempDir dir("reweigh");
    write_file(dir.path / "in.csv", kTinyPrepared);
    fs::path out = dir.path / "out.csv";

    Outcome res = run_cli("reweigh --input '" + (dir.path / "in.csv").string() +
                          "' --out '" + out.string() + "'");
    CHECK(res.code == 0);
    for (const char* tag : {"w(pos,priv)=", "w(pos,unpriv)=", "w(neg,priv)=",
                            "w(neg,unpriv)="})
        CHECK(res.out.find(tag) != std::string::npos);
    REQUIRE(fs::exists(out));
    CHECK(slurp(out) != slurp(dir.path / "in.csv"));

    CHECK(run_cli("reweigh --input '" + (dir.path / "gone.csv").string() +
                  "' --out '" + out.string() + "'").code == 2);

    // a dataset with an empty (label, group) cell cannot be reweighed
    write_file(dir.path / "empty_cell.csv",
               "f0,label,protected,weight\n1,1,1,1\n0,0,1,1\n1,1,0,1\n");
    Outcome empty = run_cli("reweigh --input '" + (dir.path / "empty_cell.csv").string() +
                            "' --out '" + out.string() + "'");
    CHECK(empty.code == 2);
    CHECK(empty.err.find("empty cell") != std::string::npos);
}

TEST_CASE("run produces reports for a config file with overrides") {
    TempDir dir("run");
    write_file(dir.path / "exp.conf",
               "dataset = compas\n"
               "protected = race\n"
               "models = logreg\n"
               "seed = 3\n");
    fs::path out = dir.path / "out";

    Outcome res = run_cli("run --config '" + (dir.path / "exp.conf").string() +
                          "' --data '" + root_path() + "/data' --out '" +
                          out.string() + "'");
    CHECK(res.code == 0);
    CHECK(res.out.find("## Fairness audit — before reweighing") != std::string::npos);
    CHECK(res.out.find("| Logistic Regression |") != std::string::npos);
    for (const char* name : {"report.md", "report.csv", "report.json"}) {
        CHECK(fs::exists(out / name));
        CHECK(res.err.find(name) != std::string::npos); // paths logged to stderr
    }

    std::string csv = slurp(out / "report.csv");
    CHECK(csv.rfind("model,phase,ba,spd,aod,di,eod,ti\n", 0) == 0);
    CHECK(csv.find("logreg,before,") != std::string::npos);
    CHECK(csv.find("logreg,after,") != std::string::npos);
}

TEST_CASE("run usage errors exit with code 1, missing data with code 2") {
    TempDir dir("runbad");
    CHECK(run_cli("run --dataset marketing").code == 1);
    CHECK(run_cli("run --dataset compas --grid upward").code == 1);
    CHECK(run_cli("run --dataset compas --eval-split maybe").code == 1);
    CHECK(run_cli("run --dataset compas --models logreg --test-fraction 2").code == 1);
    CHECK(run_cli("run --config '" + (dir.path / "none.conf").string() + "'").code == 1);
    // an empty data directory has no raw files to prepare
    CHECK(run_cli("run --dataset compas --models logreg --data '" +
                  (dir.path / "empty").string() + "'").code == 2);
}

TEST_CASE("sweep writes one threshold series per model and phase") {
    TempDir dir("sweep");
    fs::path out = dir.path / "out";
    Outcome res = run_cli("sweep --dataset compas --protected race --models gnb"
                          " --seed 3 --grid 0.4:0.2:0.8 --data '" +
                          root_path() + "/data' --out '" + out.string() + "'");
    CHECK(res.code == 0);
    for (const char* name : {"sweep_gnb_before.csv", "sweep_gnb_after.csv"}) {
        REQUIRE(fs::exists(out / name));
        std::string series = slurp(out / name);
        CHECK(series.rfind("threshold,ba,spd,aod,di,eod,ti\n", 0) == 0);
        CHECK(std::count(series.begin(), series.end(), '\n') == 4); // header + 3
    }
}

TEST_CASE("fetch verifies an existing download without touching the network") {
    // the repository's data directory already holds verified copies, so this
    // completes offline
    REQUIRE(fs::exists(fs::path(root_path()) / "data" / "adult" / "adult-all.csv"));
    Outcome res = run_cli("fetch --dataset adult --out '" + root_path() + "/data'" +
                          " --manifest '" + root_path() + "/share/dataset_manifest.json'");
    CHECK(res.code == 0);
    CHECK(res.out.find("verified ") != std::string::npos);
    CHECK(res.out.find("adult-all.csv") != std::string::npos);
}

TEST_CASE("fetch rejects unknown datasets and a missing manifest") {
    CHECK(run_cli("fetch --dataset lending --manifest '" + root_path() +
                  "/share/dataset_manifest.json'").code == 1);
    CHECK(run_cli("fetch --dataset adult --manifest '/no/such/manifest.json'").code == 2);
}
