// Drives the command-line binary end to end. Takes the binary path as argv[1].
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using Json = nlohmann::json;

namespace {

std::string g_cli;
int g_failures = 0;

struct RunResult {
    int code = -1;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = g_cli + " " + args + " 2>&1";
    RunResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) {
        std::fprintf(stderr, "popen failed for: %s\n", cmd.c_str());
        return r;
    }
    char buf[4096];
    while (size_t got = fread(buf, 1, sizeof buf, pipe)) r.out.append(buf, got);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

void expect(bool ok, const std::string& label) {
    if (ok) {
        std::printf("ok   %s\n", label.c_str());
    } else {
        ++g_failures;
        std::printf("FAIL %s\n", label.c_str());
    }
}

void expect_contains(const RunResult& r, const std::string& needle,
                     const std::string& label) {
    const bool ok = r.out.find(needle) != std::string::npos;
    expect(ok, label);
    if (!ok) std::printf("  output was:\n%s\n", r.out.c_str());
}

Json read_json(const fs::path& p) {
    std::ifstream in(p);
    return Json::parse(in);
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: %s <cli-binary>\n", argv[0]);
        return 2;
    }
    g_cli = argv[1];
    const fs::path tmp = fs::temp_directory_path() /
                         ("treefpp_cli_" + std::to_string(::getpid()));
    fs::create_directories(tmp);

    {
        RunResult r = run_cli("zoo list");
        expect(r.code == 0, "zoo list exits 0");
        expect_contains(r, "grigorchuk", "zoo list names the torsion group");
        expect_contains(r, "wreath:", "zoo list names the wreath family");
    }

    {
        const fs::path out = tmp / "fpp.json";
        const fs::path csv = tmp / "fpp.csv";
        RunResult r = run_cli("fpp --group grigorchuk --max-level 3 --mode exact --out " +
                              out.string() + " --csv " + csv.string());
        expect(r.code == 0, "fpp exact exits 0");
        expect_contains(r, "39/128", "fpp prints the level-3 value");
        expect_contains(r, "fingerprint ", "fpp prints a fingerprint");
        Json j = read_json(out);
        expect(j.at("results").at("fpp").at("levels").at(2).at("exact").at("exact") ==
                   "39/128",
               "json report carries the exact value");
        const std::string fp = j.at("fingerprint");
        expect(r.out.find("fingerprint " + fp) != std::string::npos,
               "stdout fingerprint matches the report");
        std::ifstream cin(csv);
        std::string header;
        std::getline(cin, header);
        expect(header.rfind("level,", 0) == 0, "csv has the column header");
    }

    {
        std::vector<std::string> prints;
        std::vector<Json> results;
        for (int threads : {1, 4, 8}) {
            const fs::path out = tmp / ("t" + std::to_string(threads) + ".json");
            RunResult r = run_cli("fpp --group grigorchuk --max-level 3 --mode exact"
                                  " --threads " + std::to_string(threads) +
                                  " --out " + out.string());
            expect(r.code == 0, "fpp --threads " + std::to_string(threads) + " exits 0");
            Json j = read_json(out);
            prints.push_back(j.at("fingerprint"));
            results.push_back(j.at("results"));
        }
        expect(prints[0] == prints[1] && prints[1] == prints[2],
               "fingerprint is identical across 1/4/8 threads");
        expect(results[0] == results[1] && results[1] == results[2],
               "results are identical across thread counts");
    }

    {
        RunResult r = run_cli("fpp --group no-such-group --max-level 1");
        expect(r.code == 1, "unknown group key exits 1");
        expect_contains(r, "error:", "unknown group key explains itself");
        RunResult r2 = run_cli("fpp --group grigorchuk --max-level 2 --mode mc");
        expect(r2.code == 1, "mc without a seed exits 1");
        expect_contains(r2, "seed", "the seed error names the flag");
    }

    {
        RunResult r = run_cli("nucleus --group grigorchuk");
        expect(r.code == 0, "nucleus exits 0 when conclusive");
        expect_contains(r, "nucleus has 5 elements", "nucleus size is printed");
        RunResult tiny =
            run_cli("nucleus --group basilica --depth-cap 1 --pair-cap 2 --element-cap 2");
        expect(tiny.code == 2, "capped nucleus exits 2");
        expect_contains(tiny, "inconclusive", "capped nucleus says inconclusive");
    }

    {
        RunResult holds = run_cli("jones-check --group ob");
        expect(holds.code == 0, "criterion check exits 0 when it holds");
        expect_contains(holds, "holds", "criterion reported as holding");
        RunResult fails = run_cli("jones-check --group ggs:p=3,alpha=1.2");
        expect(fails.code == 0, "witnessed failure still exits 0");
        expect_contains(fails, "witness b", "failure witness is printed");
    }

    {
        RunResult r = run_cli("check --group grigorchuk --property martingale --max-level 3");
        expect(r.code == 0, "martingale check exits 0");
        expect_contains(r, "pass", "martingale condition passes");
        RunResult frac = run_cli(
            "check --group coset:alt3-sym3 --property strongly-fractal"
            " --stab-levels 1 --target-level 1");
        expect(frac.code == 0, "failed property check still exits 0");
        expect_contains(frac, "fail", "stronger property fails for the coset group");
    }

    {
        RunResult r = run_cli(
            "independence --group grigorchuk --base-level 1 --section-level 1");
        expect(r.code == 0, "independence exits 0");
        expect_contains(r, "all product identities hold", "independence summary");
    }

    {
        RunResult empty = run_cli(
            "conditional --group grigorchuk --base-level 2 --extra-levels 1"
            " --fixed-count 1 --mode exact");
        expect(empty.code == 2, "empty condition exits 2");
        expect_contains(empty, "no level-2 element", "empty condition is explained");
        RunResult four = run_cli(
            "conditional --group grigorchuk --base-level 2 --extra-levels 1"
            " --fixed-count 4 --mode exact");
        expect(four.code == 0, "satisfiable condition exits 0");
        expect_contains(four, "= 3/8", "conditional value printed exactly");
    }

    {
        RunResult a = run_cli("sample --group grigorchuk --level 2 --samples 2000 --seed 5");
        RunResult b = run_cli("sample --group grigorchuk --level 2 --samples 2000 --seed 5");
        expect(a.code == 0, "sampling exits 0");
        expect(a.out == b.out, "same seed reproduces the histogram");
        RunResult c = run_cli("sample --group grigorchuk --level 2 --samples 2000 --seed 6");
        expect(a.out != c.out, "another seed moves the histogram");
        RunResult w = run_cli("sample --group wreath:sym2 --level 3 --samples 1000 --seed 1");
        expect(w.code == 0, "closed-group sampling exits 0");
        expect_contains(w, "fixed-leaf share", "sampling prints the share");
    }

    {
        const fs::path cache = tmp / "cache";
        const fs::path cold = tmp / "cold.json";
        const fs::path warm = tmp / "warm.json";
        RunResult r1 = run_cli("fpp --group grigorchuk --max-level 3 --mode exact --cache " +
                               cache.string() + " --out " + cold.string());
        expect(r1.code == 0, "cold cache run exits 0");
        bool has_cache_file = false;
        for (const auto& e : fs::directory_iterator(cache)) {
            if (e.path().extension() == ".tfq") has_cache_file = true;
        }
        expect(has_cache_file, "cache files appear on disk");
        RunResult r2 = run_cli("fpp --group grigorchuk --max-level 3 --mode exact --cache " +
                               cache.string() + " --out " + warm.string());
        expect(r2.code == 0, "warm cache run exits 0");
        expect(read_json(cold).at("results") == read_json(warm).at("results"),
               "cache does not change the results");
        expect(read_json(cold).at("fingerprint") == read_json(warm).at("fingerprint"),
               "cache does not change the fingerprint");
    }

    fs::remove_all(tmp);
    if (g_failures) {
        std::printf("%d check(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all cli checks passed\n");
    return 0;
}
