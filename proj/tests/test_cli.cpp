#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include <nlohmann/json.hpp>

#include "cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "tunnelkit");
    std::ostringstream out, err;
    const int code = tunnelkit::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string scenario(const char* name) { return std::string(TUNNELKIT_SOURCE_DIR) + "/scenarios/" + name; }

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch_dir(const char* name) {
    const fs::path dir = fs::temp_directory_path() / ("tunnelkit_test_" + std::string(name));
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::vector<std::string> csv_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream is(text);
    for (std::string line; std::getline(is, line);) lines.push_back(line);
    return lines;
}

}  // namespace

TEST_CASE("delay rect emits a phase-time result") {
    const auto r = run({"delay", "rect", "--e-ev", "5", "--v0-ev", "10", "--width-nm", "1.0"});
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j.at("method") == "phase_time");
    CHECK(j.at("unit") == "s");
    CHECK(j.at("value").get<double>() > 0.0);
    CHECK(std::isfinite(j.at("value").get<double>()));
}

TEST_CASE("delay edge cases") {
    const auto zero = run({"delay", "rect", "--e-ev", "5", "--v0-ev", "10", "--width-nm", "0"});
    REQUIRE(zero.code == 0);
    CHECK(std::abs(json::parse(zero.out).at("value").get<double>()) < 1e-20);

    const auto above = run({"delay", "rect", "--e-ev", "12", "--v0-ev", "10", "--width-nm", "1.0"});
    REQUIRE(above.code == 0);
    CHECK(json::parse(above.out).at("metadata").at("regime") == "propagating");

    const auto stack = run({"delay", "stack", "--layers", "1.0:1000", "--wavelength-nm", "800"});
    REQUIRE(stack.code == 0);
    CHECK(json::parse(stack.out).at("value").get<double>() == doctest::Approx(3.33564095e-15).epsilon(1e-6));

    const auto guide = run({"delay", "guide", "--cutoff-hz", "1e10", "--length-m", "0.05", "--frequency-hz", "8e9"});
    CHECK(guide.code == 0);
    const auto ftir = run({"delay", "ftir", "--prism-index", "1.5", "--angle-deg", "60", "--gap-nm", "300",
                           "--wavelength-nm", "633", "--polarization", "p", "--format", "text"});
    CHECK(ftir.code == 0);
    CHECK(ftir.out.find("phase_time") != std::string::npos);
}

TEST_CASE("usage errors exit 2") {
    CHECK(run({}).code == 2);
    CHECK(run({"teleport"}).code == 2);
    CHECK(run({"delay", "rect", "--e-ev", "5", "--v0-ev", "10"}).code == 2);
    CHECK(run({"delay", "rect", "--e-ev", "5", "--v0-ev", "-10", "--width-nm", "1"}).code == 2);
    CHECK(run({"delay", "rect", "--e-ev", "0", "--v0-ev", "10", "--width-nm", "1"}).code == 2);
    CHECK(run({"delay", "stack", "--layers", "1.5-100", "--wavelength-nm", "800"}).code == 2);
    CHECK(run({"delay", "rect", "--e-ev", "5", "--v0-ev", "10", "--width-nm", "1", "--format", "xml"}).code == 2);
    CHECK(run({"simulate", "/nonexistent/scenario.json"}).code == 2);
    const auto one = run({"hartman", "rect", "--e-ev", "5", "--v0-ev", "10", "--kappa-length-min", "6",
                          "--kappa-length-max", "12", "--count", "1"});
    CHECK(one.code == 2);
    CHECK_FALSE(one.err.empty());
}

TEST_CASE("numerical guards exit 3") {
    const auto opaque = run({"delay", "rect", "--e-ev", "5", "--v0-ev", "10", "--width-nm", "1000"});
    CHECK(opaque.code == 3);
    CHECK_FALSE(opaque.err.empty());
    const auto dir = scratch_dir("guard");
    const auto under = run({"simulate", scenario("undersampled.json"), "--out-dir", dir.string()});
    CHECK(under.code == 3);
    CHECK(under.err.find("resolution guard") != std::string::npos);
}

TEST_CASE("hartman scan over an opaque barrier saturates") {
    const auto r = run({"hartman", "rect", "--e-ev", "5", "--v0-ev", "10", "--kappa-length-min", "6",
                        "--kappa-length-max", "12", "--count", "7"});
    REQUIRE(r.code == 0);
    const auto lines = csv_lines(r.out);
    REQUIRE(lines.size() == 9);
    CHECK(lines.front() == "length_m,tau_s");
    const std::string last = lines.back();
    REQUIRE(last.rfind("saturation_diagnostic,", 0) == 0);
    CHECK(std::stod(last.substr(last.find(',') + 1)) < 0.01);
}

TEST_CASE("hartman scan above the barrier grows") {
    const auto r = run({"hartman", "rect", "--e-ev", "40", "--v0-ev", "10", "--length-min-m", "1e-9",
                        "--length-max-m", "3e-9", "--count", "3"});
    REQUIRE(r.code == 0);
    const auto lines = csv_lines(r.out);
    REQUIRE(lines.size() == 5);
    double previous = 0;
    for (std::size_t i = 1; i <= 3; ++i) {
        const double tau = std::stod(lines[i].substr(lines[i].find(',') + 1));
        CHECK(tau > previous);
        previous = tau;
    }
}

TEST_CASE("hartman scan marks failed points") {
    // kappa L runs from 11 to 1150: the two longest lengths underflow.
    const auto r = run({"hartman", "rect", "--e-ev", "5", "--v0-ev", "10", "--length-min-m", "1e-9",
                        "--length-max-m", "1e-7", "--count", "5"});
    REQUIRE(r.code == 0);
    const auto lines = csv_lines(r.out);
    REQUIRE(lines.size() == 7);
    CHECK(lines[3].back() != ',');
    CHECK(lines[4].back() == ',');
    CHECK(lines[5].back() == ',');
    const auto all_bad = run({"hartman", "rect", "--e-ev", "5", "--v0-ev", "10", "--length-min-m", "5e-7",
                              "--length-max-m", "1e-6", "--count", "3"});
    CHECK(all_bad.code == 3);
}

TEST_CASE("table reproduces the verdict") {
    const auto text = run({"table"});
    REQUIRE(text.code == 0);
    CHECK(text.out.find("universal within first order: PASS") != std::string::npos);
    CHECK(text.out.find("4.26") != std::string::npos);
    CHECK(text.out.find("sqrt form") != std::string::npos);

    const auto j = run({"table", "--format", "json"});
    REQUIRE(j.code == 0);
    const auto report = json::parse(j.out);
    CHECK(report.at("entries").size() == 8);
    CHECK(report.at("universal") == true);
    const auto& ion = report.at("ionization_supplement");
    CHECK(ion.at("tau_A_ratio_form_s").get<double>() == doctest::Approx(4.26e-18).epsilon(2e-3));
    CHECK(ion.at("tau_A_sqrt_form_s").get<double>() == doctest::Approx(18.0e-18).epsilon(2e-3));

    const auto file = run({"table", "--table", std::string(TUNNELKIT_SOURCE_DIR) + "/data/table.json"});
    CHECK(file.code == 0);
    CHECK(file.out == text.out);
}

TEST_CASE("identical commands give byte-identical output") {
    const std::vector<std::string> args{"delay", "ftir", "--prism-index", "1.5", "--angle-deg", "50",
                                        "--gap-nm", "200", "--wavelength-nm", "633"};
    CHECK(run(args).out == run(args).out);
    CHECK(run({"table", "--format", "json"}).out == run({"table", "--format", "json"}).out);

    const auto a = scratch_dir("det_a");
    const auto b = scratch_dir("det_b");
    const auto ra = run({"simulate", scenario("free_v0.json"), "--out-dir", a.string()});
    const auto rb = run({"simulate", scenario("free_v0.json"), "--out-dir", b.string(), "--threads", "1"});
    REQUIRE(ra.code == 0);
    REQUIRE(rb.code == 0);
    auto strip_paths = [](const std::string& text) {
        auto j = json::parse(text);
        j.erase("trajectory_csv");
        j.erase("arrival_json");
        return j.dump();
    };
    CHECK(strip_paths(ra.out) == strip_paths(rb.out));
    CHECK(slurp(a / "free_v0_trajectory.csv") == slurp(b / "free_v0_trajectory.csv"));
    CHECK(slurp(a / "free_v0_arrival.json") == slurp(b / "free_v0_arrival.json"));
    CHECK(slurp(a / "free_v0_trajectory.csv").rfind("step,t,norm,centroid,peak_x,detector_flux\n", 0) == 0);
    const auto sim = json::parse(ra.out);
    CHECK(sim.at("ratio").get<double>() == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("output file option") {
    const auto dir = scratch_dir("out");
    const auto path = (dir / "delay.json").string();
    const auto r = run({"delay", "rect", "--e-ev", "5", "--v0-ev", "10", "--width-nm", "1.0", "--out", path});
    REQUIRE(r.code == 0);
    CHECK(json::parse(slurp(path)).at("method") == "phase_time");
}

TEST_CASE("the executable honours the exit-code contract") {
    const std::string exe = TUNNELKIT_CLI_PATH;
    auto status = [&](const std::string& args) {
        const int raw = std::system((exe + " " + args + " > /dev/null 2>&1").c_str());
        return WEXITSTATUS(raw);
    };
    CHECK(status("table") == 0);
    CHECK(status("delay rect --e-ev 5") == 2);
    CHECK(status("delay rect --e-ev 5 --v0-ev 10 --width-nm 1000") == 3);
}
