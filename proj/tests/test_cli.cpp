#include <doctest.h>

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace {

struct CliResult {
    int exit_code = -1;
    std::string output;  // stdout + stderr
};

CliResult run_cli(const std::string& args) {
    const std::string command = std::string("\"") + QGAUSS_CLI_PATH + "\" " + args + " 2>&1";
    FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CliResult result;
    char buffer[4096];
    std::size_t got = 0;
    while ((got = fread(buffer, 1, sizeof(buffer), pipe)) > 0) result.output.append(buffer, got);
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

std::string field(const std::string& output, const std::string& key) {
    const std::string needle = key + "=";
    const auto pos = output.find(needle);
    REQUIRE(pos != std::string::npos);
    const auto end = output.find('\n', pos);
    return output.substr(pos + needle.size(), end - pos - needle.size());
}

}  // namespace

TEST_CASE("cli moment: engines and values") {
    auto r = run_cli("moment --q 0.5 --poly \"X1^4\"");
    CHECK(r.exit_code == 0);
    CHECK(std::stod(r.output) == doctest::Approx(2.5).epsilon(1e-15));

    r = run_cli("moment --q 0.5 --poly \"X1^4\" --method wick");
    CHECK(r.exit_code == 0);
    CHECK(std::stod(r.output) == doctest::Approx(2.5).epsilon(1e-13));

    r = run_cli("moment --q 0.3 --poly \"X1*X2\"");
    CHECK(r.exit_code == 0);
    CHECK(std::stod(r.output) == 0.0);

    // The Wick formula holds on the closed interval; the Fock engine stops
    // strictly inside it.
    r = run_cli("moment --q 1 --poly \"X1^4\" --method wick");
    CHECK(r.exit_code == 0);
    CHECK(std::stod(r.output) == doctest::Approx(3.0).epsilon(1e-14));

    r = run_cli("moment --q 1 --poly \"X1^4\" --method fock");
    CHECK(r.exit_code == 2);
}

TEST_CASE("cli moment: parse errors carry a position and exit 2") {
    auto r = run_cli("moment --q 0.5 --poly \"X0\"");
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("position") != std::string::npos);

    r = run_cli("moment --q 0.5 --poly \"X1 +\"");
    CHECK(r.exit_code == 2);

    r = run_cli("moment --q 2 --poly \"X1\"");
    CHECK(r.exit_code == 2);
}

TEST_CASE("cli norm: escalation, fixed n, and the budget exit code") {
    auto r = run_cli("norm --q 0 --poly \"X1\" --gap 0.8");
    CHECK(r.exit_code == 0);
    const double lower = std::stod(field(r.output, "lower"));
    const double upper = std::stod(field(r.output, "upper"));
    CHECK(lower <= 2.0);
    CHECK(upper >= 2.0);
    CHECK(upper - lower <= 0.8);

    r = run_cli("norm --q 0.5 --poly \"X1\" --n 4");
    CHECK(r.exit_code == 0);
    CHECK(field(r.output, "n_used") == "4");

    // An unreachable gap with a tiny escalation cap exhausts the budget:
    // results are still printed, exit code 3.
    r = run_cli("norm --q 0 --poly \"X1\" --gap 1e-9 --max-n 2");
    CHECK(r.exit_code == 3);
    CHECK(field(r.output, "exhausted") == "1");
    CHECK(std::stod(field(r.output, "lower")) > 0.0);

    r = run_cli("norm --q 0.9999 --poly \"X1\"");
    CHECK(r.exit_code == 2);
}

TEST_CASE("cli spectrum: JSON document") {
    auto r = run_cli("spectrum --q 0 --poly \"X1\" --level 3");
    CHECK(r.exit_code == 0);
    const auto doc = nlohmann::json::parse(r.output);
    CHECK(doc["q"].get<double>() == 0.0);
    CHECK(doc["level"].get<int>() == 3);
    CHECK(doc["poly"].get<std::string>() == "X1");
    const auto eigenvalues = doc["eigenvalues"].get<std::vector<double>>();
    REQUIRE(eigenvalues.size() == 4);
    CHECK(eigenvalues[3] == doctest::Approx(2.0 * std::cos(std::numbers::pi / 5.0)).epsilon(1e-12));
    CHECK(eigenvalues[1] ==
          doctest::Approx(-2.0 * std::cos(2.0 * std::numbers::pi / 5.0)).epsilon(1e-12));

    r = run_cli("spectrum --q 0 --poly \"X1*X2\" --level 4");
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("self-adjoint") != std::string::npos);

    r = run_cli("spectrum --q 0 --poly \"1\" --level 2");
    CHECK(r.exit_code == 0);
    for (double ev : nlohmann::json::parse(r.output)["eigenvalues"].get<std::vector<double>>())
        CHECK(ev == doctest::Approx(1.0).epsilon(1e-12));

    // --d may raise the inferred generator count (1 + 2 + 4 basis words here)
    // but never lower it.
    r = run_cli("spectrum --q 0 --poly \"X1\" --level 2 --d 2");
    CHECK(r.exit_code == 0);
    CHECK(nlohmann::json::parse(r.output)["eigenvalues"].size() == 7);
    r = run_cli("spectrum --q 0 --poly \"X1*X2 + X2*X1\" --level 2 --d 1");
    CHECK(r.exit_code == 2);
}

TEST_CASE("cli sweep: CSV shape, determinism, output file") {
    const std::string csv_args =
        "sweep --poly \"X1\" --q-from -0.5 --q-to 0.5 --steps 11 --gap 1.0 --max-n 16 --threads 1";
    auto r = run_cli(csv_args);
    CHECK(r.exit_code == 0);

    std::istringstream lines(r.output);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "q,lower,upper,direct_upper,n_used,level_used");
    std::vector<double> qs;
    while (std::getline(lines, line)) {
        if (line.empty()) continue;
        qs.push_back(std::stod(line.substr(0, line.find(','))));
    }
    REQUIRE(qs.size() == 11);
    for (std::size_t i = 0; i < qs.size(); ++i)
        CHECK(qs[i] == doctest::Approx(-0.5 + 0.1 * static_cast<double>(i)).epsilon(1e-14));

    // Byte-identical across reruns and thread counts.
    const auto rerun = run_cli(csv_args);
    CHECK(rerun.output == r.output);
    const auto threaded = run_cli(
        "sweep --poly \"X1\" --q-from -0.5 --q-to 0.5 --steps 11 --gap 1.0 --max-n 16 --threads 2");
    CHECK(threaded.output == r.output);

    // --out writes the same payload to a file.
    const std::string path = std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp") +
                             "/qgauss_sweep_test.csv";
    const auto to_file = run_cli(csv_args + " --out \"" + path + "\"");
    CHECK(to_file.exit_code == 0);
    std::ifstream file(path);
    std::stringstream payload;
    payload << file.rdbuf();
    CHECK(payload.str() == r.output);
    std::remove(path.c_str());

    r = run_cli("sweep --poly \"X1\" --q-from -1 --q-to 0.5 --steps 5");
    CHECK(r.exit_code == 2);

    // Rows that exhaust the escalation budget before the gap closes still
    // print, with exit code 3.
    r = run_cli("sweep --poly \"X1\" --q-from -0.1 --q-to 0.1 --steps 3 --gap 1e-9 --max-n 2 --threads 1");
    CHECK(r.exit_code == 3);
    CHECK(r.output.find("q,lower,upper,direct_upper,n_used,level_used") != std::string::npos);
    CHECK(std::count(r.output.begin(), r.output.end(), '\n') == 4);
}

TEST_CASE("cli sweep: json format and spectra sidecar") {
    auto r = run_cli(
        "sweep --poly \"X1\" --q-from -0.2 --q-to 0.2 --steps 3 --gap 0.9 --max-n 16 "
        "--format json --threads 1");
    CHECK(r.exit_code == 0);
    const auto doc = nlohmann::json::parse(r.output);
    REQUIRE(doc["rows"].size() == 3);
    CHECK(doc["rows"][1]["q"].get<double>() == 0.0);
    CHECK(doc["rows"][1]["lower"].get<double>() <= 2.0);
    CHECK(doc["rows"][1]["upper"].get<double>() >= 2.0);

    const std::string path = std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp") +
                             "/qgauss_spectra_test.json";
    r = run_cli(
        "sweep --poly \"X1\" --q-from -0.2 --q-to 0.2 --steps 3 --gap 0.9 --max-n 16 "
        "--spectra-level 5 --spectra-out \"" + path + "\" --threads 1 --out /dev/null");
    CHECK(r.exit_code == 0);
    std::ifstream file(path);
    REQUIRE(file.good());
    nlohmann::json spectra;
    file >> spectra;
    REQUIRE(spectra.size() == 3);
    CHECK(spectra[0]["level"].get<int>() == 5);
    CHECK(spectra[0]["eigenvalues"].size() == 6);
    std::remove(path.c_str());
}

TEST_CASE("cli: usage errors exit 2") {
    CHECK(run_cli("").exit_code == 2);
    CHECK(run_cli("frobnicate --q 0").exit_code == 2);
    CHECK(run_cli("moment --poly \"X1\"").exit_code == 2);  // missing --q
    CHECK(run_cli("spectrum --q 0 --poly \"X1^2\" --level 1").exit_code == 2);  // level < degree
}
