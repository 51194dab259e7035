// Integration checks for the command-line tool: spawns the binary given as
// argv[1] and verifies outputs, exit codes, and round trips against direct
// library runs.

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "json.hpp"

#include "hyptel/factor.hpp"
#include "hyptel/ore.hpp"
#include "hyptel/term.hpp"

using nlohmann::json;

namespace {

int failures = 0;

#define EXPECT(cond, msg)                                      \
    do {                                                       \
        if (!(cond)) {                                         \
            ++failures;                                        \
            std::cerr << "FAIL: " << msg << "\n";              \
        }                                                      \
    } while (0)

struct RunResult {
    int code = -1;
    std::string out;
};

RunResult run(const std::string& cmd) {
    RunResult r;
    FILE* p = popen((cmd + " 2>/dev/null").c_str(), "r");
    if (!p) {
        ++failures;
        std::cerr << "FAIL: cannot spawn: " << cmd << "\n";
        return r;
    }
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, got);
    int st = pclose(p);
    r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: cli_checks <path-to-cli>\n";
        return 2;
    }
    const std::string cli = argv[1];

    // Round trip: the JSON operators must reparse to exactly the operators
    // the library computes for the same options.
    const std::string expr = "binomial(n,k)^3/(2*n+3*k)";
    RunResult tj = run(cli + " telescope --expr '" + expr +
                       "' --expanded --format json");
    EXPECT(tj.code == 0, "telescope json run exits 0");
    {
        json j = json::parse(tj.out);
        hyptel::TelescopeOptions opt;
        opt.expanded = true;
        hyptel::TelescoperResult lib =
            hyptel::telescope(hyptel::parse_term(expr), opt);
        EXPECT(hyptel::OreOp::from_json(j["l_min"]) == lib.l_min,
               "l_min round trips");
        EXPECT(hyptel::OreOp::from_json(j["l_left"]) == lib.l_left,
               "l_left round trips");
        hyptel::OreOp right =
            hyptel::OreOp::from_json(j["right_factor"]["op"]);
        EXPECT(right == lib.right.op, "right factor round trips");
        hyptel::OreOp expanded = hyptel::OreOp::from_json(j["l_expanded"]);
        EXPECT(expanded == *lib.l_expanded, "l_expanded round trips");
        EXPECT((hyptel::OreOp::from_json(j["l_left"]) * right).normalized() ==
                   expanded,
               "factored product reproduces the expanded operator");
        EXPECT(j["dim"].get<int>() == lib.dim, "dimension matches");

        // Identical invocations must produce identical bytes.
        RunResult again = run(cli + " telescope --expr '" + expr +
                              "' --expanded --format json");
        EXPECT(again.out == tj.out, "size report is reproducible");

        // Symmetry off changes the route, not the expanded operator.
        RunResult plain = run(cli + " telescope --expr '" + expr +
                              "' --expanded --no-symmetry --format json");
        EXPECT(plain.code == 0, "no-symmetry run exits 0");
        json pj = json::parse(plain.out);
        EXPECT(hyptel::OreOp::from_json(pj["l_expanded"]) == expanded,
               "no-symmetry reproduces the expanded operator");
    }

    // Unsupported denominators report a stable machine-readable code.
    RunResult bad = run(cli +
                        " telescope --expr 'binomial(n,k)/(n^2+k^2+1)' "
                        "--format json");
    EXPECT(bad.code == 2, "unsupported input exits 2");
    {
        json j = json::parse(bad.out);
        EXPECT(j["error"]["code"] == "unsupported_denominator",
               "error code names the condition");
    }

    // verify: a wrong operator fails with exit 1, the right one passes.
    RunResult vfail =
        run(cli + " verify --expr 'binomial(n,k)' --op 'S-3' --n 12");
    EXPECT(vfail.code == 1, "wrong operator exits 1");
    RunResult vok =
        run(cli + " verify --expr 'binomial(n,k)' --op 'S-2' --n 12");
    EXPECT(vok.code == 0, "right operator exits 0");

    // Saved results reload and verify end to end.
    const std::string saved = temp_path("hyptel_cli_checks_result.json");
    RunResult sv = run(cli + " telescope --expr 'binomial(n,k)/(2*n+3*k+1)' "
                             "--expanded --certificate --format json --out " +
                       saved);
    EXPECT(sv.code == 0, "telescope --out exits 0");
    RunResult rv = run(cli + " verify --expr 'binomial(n,k)/(2*n+3*k+1)' "
                             "--result " +
                       saved + " --n 16");
    EXPECT(rv.code == 0, "saved result verifies");
    std::filesystem::remove(saved);

    // telescope --verify runs the checks inline.
    RunResult tv = run(cli + " telescope --expr 'binomial(n,k)/(2*n+3*k+1)' "
                             "--certificate --verify 12");
    EXPECT(tv.code == 0, "inline verification exits 0");
    EXPECT(tv.out.find("pass") != std::string::npos,
           "inline verification reports passing checks");

    // guess recovers the closed-form recurrence of the row sums.
    RunResult gj = run(cli + " guess --expr 'binomial(n,k)' --max-order 2 "
                             "--max-degree 1 --format json");
    EXPECT(gj.code == 0, "guess exits 0");
    {
        json j = json::parse(gj.out);
        hyptel::OreOp got = hyptel::OreOp::from_json(j["recurrence"]);
        hyptel::OreOp want =
            hyptel::OreOp::from_coeffs(
                {{1, hyptel::RFuncN(1L)}, {0, hyptel::RFuncN(-2L)}})
                .normalized();
        EXPECT(got == want, "guessed recurrence is the doubling rule");
    }

    // reduce reports the section space dimension.
    RunResult rd =
        run(cli + " reduce --expr 'binomial(n,k)^3' --format json");
    EXPECT(rd.code == 0, "reduce exits 0");
    {
        json j = json::parse(rd.out);
        EXPECT(j["dim"].get<int>() == 3, "cube kernel has three sections");
    }

    // Structured input files carry the k-range.
    const std::string doc = temp_path("hyptel_cli_checks_input.txt");
    {
        std::ofstream f(doc);
        f << "[term]\nexpr = binomial(n,k)/(n+k+1)\n\n[sum]\nk_range = "
             "0..n\n";
    }
    RunResult di = run(cli + " telescope --input " + doc + " --verify 10");
    EXPECT(di.code == 0, "document input verifies");
    std::filesystem::remove(doc);

    // bench runs the cheap example.
    RunResult bn = run(cli + " bench rational");
    EXPECT(bn.code == 0, "bench exits 0");
    EXPECT(bn.out.find("rational:") == 0, "bench reports the example row");

    if (failures == 0) {
        std::cout << "cli_checks: all checks passed\n";
        return 0;
    }
    std::cerr << "cli_checks: " << failures << " failure(s)\n";
    return 1;
}
