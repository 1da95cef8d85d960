#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

namespace {

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run(const std::string& args) {
    const std::string cmd = std::string(AOI_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) out.append(buf, n);
    const int status = pclose(pipe);
    return {WEXITSTATUS(status), out};
}

std::size_t count_lines(const std::string& s) {
    std::size_t n = 0;
    for (char c : s)
        if (c == '\n') ++n;
    return n;
}

}  // namespace

TEST_CASE("analyze emits one CSV row") {
    const RunResult r = run(
        "analyze --scheme np-buffer --lambda 0.4 --dist gamma --mean 2 --k 10 --b0 15 --alpha 0.1");
    CHECK(r.exit_code == 0);
    CHECK(count_lines(r.out) == 2);
    CHECK(r.out.rfind("scheme,lambda,mean_comp,k,mu,avg_aoi,avg_peak_aoi,p_busy,eff_rate\n",
                      0) == 0);
    CHECK(r.out.find("np-buffer,0.4,2,10,") != std::string::npos);
    CHECK(r.out.find("\r") == std::string::npos);  // LF endings only
}

TEST_CASE("invalid parameters exit 2") {
    CHECK(run("analyze --scheme np-buffer --lambda -1 --mean 2 --mu 1").exit_code == 2);
    CHECK(run("analyze --scheme bogus --lambda 0.4 --mean 2 --mu 1").exit_code == 2);
    CHECK(run("analyze --scheme np-buffer --lambda 0.4 --mean 2").exit_code == 2);
    CHECK(run("analyze --scheme np-buffer --lambda 0.4 --mean 2 --mu 1 --b0 15 --alpha 0.1")
              .exit_code == 2);
    CHECK(run("analyze --scheme np-buffer --lambda 0.4 --mean 2 --mu 1 --nope 3").exit_code == 2);
    CHECK(run("optimize --scheme np-buffer --lambda 0.4 --mu 1").exit_code == 2);
    CHECK(run("sweep --scheme np-buffer --lambda 0.4 --b0 15 --alpha 0.1 "
              "--parameter bogus --from 0 --to 1").exit_code == 2);
}

TEST_CASE("validate passes on an acceptance cell") {
    const RunResult r = run(
        "validate --scheme preempt-tx --lambda 0.4 --mean 2 --k 10 --b0 15 --alpha 0.1 "
        "--packets 200000 --seed 1");
    CHECK(r.exit_code == 0);
    CHECK(r.out.rfind("metric,analytic,simulated,rel_error,pass\n", 0) == 0);
    CHECK(count_lines(r.out) == 3);
    // an absurd tolerance must flip the exit code, not the output shape
    const RunResult strict = run(
        "validate --scheme preempt-tx --lambda 0.4 --mean 2 --k 10 --b0 15 --alpha 0.1 "
        "--packets 20000 --seed 1 --tol 1e-9");
    CHECK(strict.exit_code == 4);
    CHECK(count_lines(strict.out) == 3);
}

TEST_CASE("byte-identical output for identical inputs") {
    const std::string args =
        "simulate --scheme preempt-comp --lambda 0.4 --mean 2 --k 10 --b0 15 --alpha 0.1 "
        "--packets 20000 --seed 42";
    const RunResult a = run(args);
    const RunResult b = run(args);
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
    const RunResult c = run(args + "0");  // seed 420
    CHECK(c.out != a.out);
}

TEST_CASE("config file merge and overrides") {
    {
        std::ofstream f("/tmp/aoi_cli_test.cfg");
        f << "# coupling\n"
          << "b0 = 15\n"
          << "alpha = 0.05\n"
          << "mean = 2\n";
    }
    const RunResult merged = run(
        "analyze --scheme np-buffer --lambda 0.4 --k 10 --config /tmp/aoi_cli_test.cfg "
        "--alpha 0.1");
    CHECK(merged.exit_code == 0);
    // the flag overrides the file: mu = 1/(15*exp(-0.2))
    CHECK(merged.out.find("0.08142685054401133") != std::string::npos);
    const RunResult reference = run(
        "analyze --scheme np-buffer --lambda 0.4 --mean 2 --k 10 --b0 15 --alpha 0.1");
    CHECK(merged.out == reference.out);

    {
        std::ofstream f("/tmp/aoi_cli_bad.cfg");
        f << "unknown_key = 3\n";
    }
    CHECK(run("analyze --scheme np-buffer --lambda 0.4 --mean 2 --mu 1 "
              "--config /tmp/aoi_cli_bad.cfg").exit_code == 2);
    CHECK(run("analyze --scheme np-buffer --lambda 0.4 --mean 2 --mu 1 "
              "--config /tmp/aoi_cli_missing.cfg").exit_code == 2);
}

TEST_CASE("json mirror") {
    const RunResult r = run(
        "analyze --scheme np-nobuffer --lambda 0.4 --mean 2 --k 10 --mu 1 --json");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("\"avg_aoi\"") != std::string::npos);
    CHECK(r.out.find("\"scheme\": \"np-nobuffer\"") != std::string::npos);
}

TEST_CASE("AOI_SEED environment default") {
    const std::string args =
        "simulate --scheme np-nobuffer --lambda 0.4 --mean 2 --k 10 --mu 1 --packets 5000";
    const RunResult env_run = [&] {
        setenv("AOI_SEED", "42", 1);
        const RunResult r = run(args);
        unsetenv("AOI_SEED");
        return r;
    }();
    const RunResult flag_run = run(args + " --seed 42");
    CHECK(env_run.exit_code == 0);
    CHECK(env_run.out == flag_run.out);
    // explicit flag wins over the environment
    const RunResult mixed = [&] {
        setenv("AOI_SEED", "7", 1);
        const RunResult r = run(args + " --seed 42");
        unsetenv("AOI_SEED");
        return r;
    }();
    CHECK(mixed.out == flag_run.out);
}

TEST_CASE("output file sink") {
    const std::string path = "/tmp/aoi_cli_out.csv";
    std::remove(path.c_str());
    const RunResult r = run(
        "analyze --scheme np-buffer --lambda 0.4 --mean 2 --k 10 --mu 1 --out " + path);
    CHECK(r.exit_code == 0);
    CHECK(r.out.empty());
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "scheme,lambda,mean_comp,k,mu,avg_aoi,avg_peak_aoi,p_busy,eff_rate");
}

TEST_CASE("tradeoff and sweep emit tables") {
    const RunResult tr = run(
        "tradeoff --scheme np-nobuffer --lambda 0.4 --k 10 --b0 15 --alpha 0.1 --steps 5");
    CHECK(tr.exit_code == 0);
    CHECK(tr.out.rfind("w1,w2,mean_comp,avg_aoi,avg_peak_aoi\n", 0) == 0);
    CHECK(count_lines(tr.out) >= 2);
    const RunResult sw = run(
        "sweep --scheme np-buffer --lambda 0.4 --k 10 --b0 15 --alpha 0.1 "
        "--parameter mean-comp --from 1 --to 10 --steps 4 --w1 1 --w2 0");
    CHECK(sw.exit_code == 0);
    CHECK(count_lines(sw.out) == 5);
}
