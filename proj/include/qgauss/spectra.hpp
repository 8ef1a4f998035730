#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "qgauss/bounds.hpp"
#include "qgauss/ncpoly.hpp"

namespace qgauss {

/// P(A) compressed to Fock levels 0..N and conjugated into an orthonormal
/// basis via per-letter-type Cholesky factors of the level Gram blocks.
/// The word-basis action is computed exactly and projected (Q_N P(A) Q_N),
/// so every eigenvalue lies inside the spectrum's convex hull and vacuum
/// moments of degree <= N are exact. Requires adjoint(P) = P and
/// N >= degree(P); the result is symmetrized by averaging with its
/// transpose, and the pre-symmetrization defect is reported on request.
Eigen::MatrixXd truncated_matrix(const NcPolynomial& p, double q, int level, Letter d = 0,
                                 double* symmetry_defect = nullptr);

struct SpectrumEstimate {
    std::vector<double> eigenvalues;  // ascending
    int level = 0;
    double q = 0.0;
    std::string poly_text;
};

SpectrumEstimate spectrum_estimate(const NcPolynomial& p, double q, int level, Letter d = 0);

/// Hausdorff distance between two finite nonempty point sets on the line.
double hausdorff_distance(std::span<const double> a, std::span<const double> b);

struct SweepRow {
    double q = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    double direct_upper = 0.0;
    int n_used = 0;
    int level_used = 0;
    bool exhausted_budget = false;
};

struct SweepOptions {
    double target_gap = 0.25;
    int max_n = 64;
    ResourceBudget budget;
    int spectra_level = 0;  // > 0: also estimate the spectrum at this level
    unsigned threads = 0;   // 0 = hardware concurrency
    Letter d = 0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::vector<SpectrumEstimate> spectra;  // parallel to rows when requested
};

/// Uniform q grid inclusive of the endpoints; certify_norm per point (and
/// spectrum_estimate when requested). Grid points are independent and run on
/// a small worker pool; rows come back in q order regardless of completion
/// order. Rejects grids touching +-1 and steps < 2.
SweepResult sweep(const NcPolynomial& p, double q_from, double q_to, int steps,
                  const SweepOptions& options = {});

/// CSV with header q,lower,upper,direct_upper,n_used,level_used; floats at
/// 17 significant digits so rows round-trip.
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

/// The spectrum JSON document: q, level, poly (canonical string), and the
/// sorted eigenvalues array.
std::string spectrum_to_json(const SpectrumEstimate& estimate);

/// JSON array of spectrum documents (one per sweep grid point).
std::string spectra_to_json(const std::vector<SpectrumEstimate>& estimates);

}  // namespace qgauss
