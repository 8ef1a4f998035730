// qgauss: moments, certified operator-norm bounds, spectra, and q-sweeps for
// self-adjoint polynomials in q-Gaussian operators.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "qgauss/bounds.hpp"
#include "qgauss/fock.hpp"
#include "qgauss/ncpoly.hpp"
#include "qgauss/spectra.hpp"
#include "qgauss/wick.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;

constexpr double kQCap = 0.999;  // norm/spectrum/sweep stay clear of |q| = 1

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

qgauss::NcPolynomial parse_poly(const std::string& text, int d_raise) {
    qgauss::NcPolynomial p = qgauss::parse(text);
    if (d_raise > 0 && d_raise < p.dimension())
        throw CLI::ValidationError("--d", "--d may only raise the inferred generator count");
    return p;
}

struct OutputTarget {
    std::string path;  // empty = stdout

    void write(const std::string& payload) const {
        if (path.empty()) {
            std::cout << payload;
            return;
        }
        std::ofstream file(path, std::ios::binary);
        if (!file) throw std::runtime_error("cannot open output file: " + path);
        file << payload;
    }
};

int run_moment(const std::string& poly_text, double q, const std::string& method, int d_raise) {
    const qgauss::NcPolynomial p = parse_poly(poly_text, d_raise);
    double value = 0.0;
    if (method == "wick") {
        value = qgauss::moment_oracle(p, q);
    } else {
        if (!(std::abs(q) < 1.0))
            throw CLI::ValidationError("--q", "the fock engine requires |q| < 1; use --method wick at the endpoints");
        value = qgauss::moment_fock(p, q);
    }
    std::cout << fmt17(value) << "\n";
    return kExitOk;
}

int run_norm(const std::string& poly_text, double q, double gap, std::optional<int> fixed_n,
             int max_n, const qgauss::ResourceBudget& budget, int d_raise) {
    const qgauss::NcPolynomial p = parse_poly(poly_text, d_raise);
    qgauss::CertifyOptions options;
    options.target_gap = gap;
    options.max_n = max_n;
    options.budget = budget;
    options.fixed_n = fixed_n;
    const qgauss::NormCertificate cert = qgauss::certify_norm(p, q, options);
    std::cout << "lower=" << fmt17(cert.lower) << "\n"
              << "upper=" << fmt17(cert.upper) << "\n"
              << "direct_upper=" << fmt17(cert.upper_direct) << "\n"
              << "n_used=" << cert.n_used << "\n"
              << "exhausted=" << (cert.exhausted_budget ? 1 : 0) << "\n";
    return cert.exhausted_budget ? kExitBudget : kExitOk;
}

int run_spectrum(const std::string& poly_text, double q, int level, int d_raise,
                 const OutputTarget& out) {
    const qgauss::NcPolynomial p = parse_poly(poly_text, d_raise);
    const qgauss::SpectrumEstimate estimate =
        qgauss::spectrum_estimate(p, q, level, static_cast<qgauss::Letter>(d_raise));
    out.write(qgauss::spectrum_to_json(estimate) + "\n");
    return kExitOk;
}

int run_sweep(const std::string& poly_text, double q_from, double q_to, int steps,
              const qgauss::SweepOptions& options, const std::string& format,
              const OutputTarget& out, const std::string& spectra_out) {
    const qgauss::NcPolynomial p = parse_poly(poly_text, options.d);
    const qgauss::SweepResult result = qgauss::sweep(p, q_from, q_to, steps, options);

    std::ostringstream payload;
    if (format == "json") {
        payload << "{\"rows\":[";
        for (std::size_t i = 0; i < result.rows.size(); ++i) {
            const auto& row = result.rows[i];
            payload << (i ? "," : "") << "{\"q\":" << fmt17(row.q) << ",\"lower\":" << fmt17(row.lower)
                    << ",\"upper\":" << fmt17(row.upper)
                    << ",\"direct_upper\":" << fmt17(row.direct_upper)
                    << ",\"n_used\":" << row.n_used << ",\"level_used\":" << row.level_used << "}";
        }
        payload << "]}\n";
    } else {
        std::ostringstream csv;
        qgauss::write_sweep_csv(csv, result.rows);
        payload << csv.str();
    }
    out.write(payload.str());

    if (!spectra_out.empty() && !result.spectra.empty())
        OutputTarget{spectra_out}.write(qgauss::spectra_to_json(result.spectra) + "\n");

    bool exhausted = false;
    for (const auto& row : result.rows) exhausted = exhausted || row.exhausted_budget;
    return exhausted ? kExitBudget : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Joint moments, certified operator-norm bounds, and spectra of self-adjoint "
                 "polynomials in q-Gaussian operators"};
    app.require_subcommand(1);

    std::string poly_text;
    double q = 0.0;
    int d_raise = 0;
    unsigned threads = 0;

    qgauss::ResourceBudget budget;

    // moment
    auto* moment = app.add_subcommand("moment", "Joint moment tau(P(A)) of a polynomial");
    std::string method = "fock";
    moment->add_option("--poly", poly_text, "polynomial, e.g. \"X1*X2 + X2*X1\"")->required();
    moment->add_option("--q", q, "deformation parameter, |q| <= 1")->required()
        ->check(CLI::Range(-1.0, 1.0));
    moment->add_option("--method", method, "engine: fock (default) or wick")
        ->check(CLI::IsMember({"fock", "wick"}));
    moment->add_option("--d", d_raise, "raise the inferred generator count")->check(CLI::Range(0, 255));

    // norm
    auto* norm = app.add_subcommand("norm", "Certified operator-norm bracket for P(A)");
    double gap = 0.25;
    int max_n = 64;
    int fixed_n = 0;
    norm->add_option("--poly", poly_text, "polynomial to certify")->required();
    norm->add_option("--q", q, "deformation parameter, |q| <= 0.999")->required()
        ->check(CLI::Range(-kQCap, kQCap));
    norm->add_option("--gap", gap, "target gap upper - lower (default 0.25)");
    norm->add_option("--n", fixed_n, "fixed exponent: no escalation")->check(CLI::Range(1, 1 << 20));
    norm->add_option("--max-n", max_n, "escalation cap (default 64)")->check(CLI::Range(1, 1 << 20));
    norm->add_option("--max-level", budget.max_level, "budget: max Fock level (default 512)");
    norm->add_option("--max-block-dim", budget.max_block_dim,
                     "budget: max per-level dimension (default 1024)");
    norm->add_option("--d", d_raise)->check(CLI::Range(0, 255));

    // spectrum
    auto* spectrum = app.add_subcommand("spectrum", "Eigenvalues of the level-N compression of P(A)");
    int level = 0;
    std::string out_path;
    spectrum->add_option("--poly", poly_text, "self-adjoint polynomial")->required();
    spectrum->add_option("--q", q, "deformation parameter, |q| <= 0.999")->required()
        ->check(CLI::Range(-kQCap, kQCap));
    spectrum->add_option("--level", level, "truncation level N >= degree(P)")->required()
        ->check(CLI::Range(0, 4096));
    spectrum->add_option("--out", out_path, "output file (default stdout)");
    spectrum->add_option("--d", d_raise, "raise the inferred generator count")
        ->check(CLI::Range(0, 255));

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "Certify over a uniform q grid");
    double q_from = 0.0, q_to = 0.0;
    int steps = 0;
    int spectra_level = 0;
    std::string sweep_format = "csv";
    std::string spectra_out;
    sweep_cmd->add_option("--poly", poly_text, "polynomial to certify per grid point")->required();
    sweep_cmd->add_option("--q-from", q_from, "grid start")->required()
        ->check(CLI::Range(-kQCap, kQCap));
    sweep_cmd->add_option("--q-to", q_to, "grid end")->required()
        ->check(CLI::Range(-kQCap, kQCap));
    sweep_cmd->add_option("--steps", steps, "grid points, endpoints included")->required()
        ->check(CLI::Range(2, 100000));
    sweep_cmd->add_option("--gap", gap, "target gap per grid point (default 0.25)");
    sweep_cmd->add_option("--max-n", max_n, "escalation cap (default 64)")
        ->check(CLI::Range(1, 1 << 20));
    sweep_cmd->add_option("--max-level", budget.max_level, "budget: max Fock level");
    sweep_cmd->add_option("--max-block-dim", budget.max_block_dim,
                          "budget: max per-level dimension");
    sweep_cmd->add_option("--spectra-level", spectra_level,
                          "also estimate spectra at this truncation level")->check(CLI::Range(0, 4096));
    sweep_cmd->add_option("--spectra-out", spectra_out, "file for the spectra JSON array");
    sweep_cmd->add_option("--format", sweep_format, "csv (default) or json")
        ->check(CLI::IsMember({"csv", "json"}));
    sweep_cmd->add_option("--out", out_path, "output file (default stdout)");
    sweep_cmd->add_option("--threads", threads, "worker cap for grid points (default: all cores)");
    sweep_cmd->add_option("--d", d_raise, "raise the inferred generator count")
        ->check(CLI::Range(0, 255));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (moment->parsed())
            return run_moment(poly_text, q, method, d_raise);
        if (norm->parsed())
            return run_norm(poly_text, q, gap,
                            fixed_n > 0 ? std::optional<int>(fixed_n) : std::nullopt, max_n, budget,
                            d_raise);
        if (spectrum->parsed())
            return run_spectrum(poly_text, q, level, d_raise, OutputTarget{out_path});
        if (sweep_cmd->parsed()) {
            qgauss::SweepOptions options;
            options.target_gap = gap;
            options.max_n = max_n;
            options.budget = budget;
            options.spectra_level = spectra_level;
            options.threads = threads;
            options.d = static_cast<qgauss::Letter>(d_raise);
            return run_sweep(poly_text, q_from, q_to, steps, options, sweep_format,
                             OutputTarget{out_path}, spectra_out);
        }
    } catch (const qgauss::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitUsage;
}
