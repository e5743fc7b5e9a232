#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#ifndef REBEL_CLI
#error "REBEL_CLI must point at the rebel binary"
#endif

namespace {

std::string workdir() {
    static std::string dir = [] {
        std::string d = "/tmp/rebel_cli_test_XXXXXX";
        char buf[64];
        std::snprintf(buf, sizeof buf, "%s", d.c_str());
        REQUIRE(mkdtemp(buf) != nullptr);
        return std::string(buf);
    }();
    return dir;
}

int run(const std::string& args) {
    std::string cmd = "cd " + workdir() + " && " + REBEL_CLI + " " + args + " >/dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string capture(const std::string& args) {
    std::string cmd = "cd " + workdir() + " && " + REBEL_CLI + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::string out;
    char buf[256];
    while (fgets(buf, sizeof buf, p)) out += buf;
    pclose(p);
    return out;
}

std::string slurp(const std::string& name) {
    std::ifstream is(workdir() + "/" + name, std::ios::binary);
    REQUIRE(is.good());
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

int line_count(const std::string& s) {
    int n = 0;
    for (char c : s) n += c == '\n';
    return n;
}

}  // namespace

TEST_CASE("sweep writes one CSV row per bin plus a manifest") {
    CHECK(run("sweep --model one-sided --rep interface --N 256 --T 1e4 --n 16 "
              "--ab 0 --ae 0.55 --seed 7 --replicas 2 --init half --out s1") == 0);
    std::string csv = slurp("s1.csv");
    CHECK(line_count(csv) == 17);  // header + 16 bins
    CHECK(csv.rfind("bin_index,alpha_mean,elapsed,rho_hat,chi_1", 0) == 0);
    CHECK(csv.find('\r') == std::string::npos);
    std::string mf = slurp("s1.manifest");
    CHECK(mf.find("direction=up\n") != std::string::npos);
    CHECK(mf.find("replica_seed_1=") != std::string::npos);
}

TEST_CASE("decreasing sweeps are valid and recorded") {
    CHECK(run("sweep --model one-sided --N 128 --T 2e3 --n 4 --ab 0.55 --ae 0.45 "
              "--seed 3 --out s2") == 0);
    CHECK(slurp("s2.manifest").find("direction=down\n") != std::string::npos);
}

TEST_CASE("usage errors exit with code 1") {
    CHECK(run("sweep --T 1e3") == 1);                          // missing --N
    CHECK(run("sweep --N 128 --model nosuch") == 1);           // unknown family
    CHECK(run("harmonic --N 128") == 1);                       // missing --patterns
    CHECK(run("fit --model linfrac") == 1);                    // missing --input
    CHECK(run("nosuchcommand") == 1);
}

TEST_CASE("runtime errors exit with code 2") {
    CHECK(run("fit --input does_not_exist.csv") == 2);
}

TEST_CASE("reruns are byte-identical") {
    const std::string flags =
        "sweep --model two-sided --N 128 --T 2e3 --n 8 --alpha 0.4 --seed 99 --replicas 2 ";
    CHECK(run(flags + "--out r1") == 0);
    CHECK(run(flags + "--out r2") == 0);
    CHECK(slurp("r1.csv") == slurp("r2.csv"));

    const std::string bm = "bitmap --model two-sided --alpha 0.4 --W 100 --T 200 --seed 5 ";
    CHECK(run(bm + "--out b1.pgm") == 0);
    CHECK(run(bm + "--out b2.pgm") == 0);
    std::string pgm = slurp("b1.pgm");
    CHECK(pgm == slurp("b2.pgm"));
    CHECK(pgm.rfind("P5\n100 201\n255\n", 0) == 0);
}

TEST_CASE("harmonic emits one value column per pattern") {
    CHECK(run("harmonic --model one-sided --N 128 --T 5e3 --n 2 --alpha 0.8 "
              "--patterns 1,11,111,101,1011,1101 --seed 2 --out h1") == 0);
    std::string header = slurp("h1.csv").substr(0, slurp("h1.csv").find('\n'));
    CHECK(header.find("f_1,f_11,f_111,f_101,f_1011,f_1101") != std::string::npos);
    // one-sided harmonic runs switch to the mirror dual automatically
    CHECK(slurp("h1.manifest").find("rep=mirror-dual\n") != std::string::npos);
}

TEST_CASE("exact duality check prints the residual and exits 0") {
    std::string out = capture("exact --check-duality --N 6 --alpha 0.37");
    CHECK(out.rfind("duality_residual=", 0) == 0);
    CHECK(run("exact --check-duality --N 6 --alpha 0.37") == 0);
}

TEST_CASE("fit recovers coefficients from a CSV") {
    {
        std::ofstream os(workdir() + "/rho.csv");
        os << "alpha,rho\n";
        for (int i = 0; i < 20; ++i) {
            double a = 0.05 + 0.02 * i;
            os << a << "," << (1 - 1.958 * a) / (1 - 0.975 * a) << "\n";
        }
    }
    std::string out = capture("fit --input rho.csv --model linfrac");
    CHECK(out.find("c1=1.958") != std::string::npos);
    CHECK(out.find("c2=0.975") != std::string::npos);
    CHECK(out.find("alpha_c=0.5107") != std::string::npos);
}

TEST_CASE("edge subcommand writes both sides") {
    CHECK(run("edge --model one-sided --N 128 --T 2e3 --n 2 --alpha 1 --seed 6 "
              "--replicas 2 --out e1") == 0);
    std::string header = slurp("e1.csv").substr(0, slurp("e1.csv").find('\n'));
    CHECK(header.find("v_minus") != std::string::npos);
    CHECK(header.find("v_plus") != std::string::npos);
}
