#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qgauss/ncpoly.hpp"

namespace qgauss {

/// C_{|q|} = 1 / prod_{m>=1} (1 - |q|^m), truncated with a certified tail.
struct HaagerupConstant {
    double q_abs = 0.0;
    double value = 1.0;
    int truncation_terms = 0;
    double tail_bound = 0.0;  // bound on the dropped log-tail
};

/// Evaluates C_{|q|} by truncating the product at M terms, with M chosen so
/// the logarithmic tail sum_{m>M} |log(1-|q|^m)| is at most
/// |q|^(M+1) / ((1-|q|)(1-|q|^(M+1))) <= rel_tol. Rejects |q| >= 1.
HaagerupConstant haagerup_constant(double q, double rel_tol = 1e-12);

/// Per-level chain bound: sum_k (k+1) C_{|q|}^(3/2) ||P_k||_2 over the Wick
/// levels of P. Tighter than the aggregated variant below.
double direct_upper(const NcPolynomial& p, double q);

/// Aggregated variant (m+1)^(3/2) C_{|q|}^(3/2) ||P||_2 with m = degree(P).
double direct_upper_aggregate(const NcPolynomial& p, double q);

/// Resource budget for the powered-moment computations, expressed as a max
/// Fock level and a max per-level dimension (word count at level 2mn).
struct ResourceBudget {
    int max_level = 512;
    std::int64_t max_block_dim = 1024;
};

/// Refusal carrying the sizing report.
class BudgetError : public std::runtime_error {
public:
    BudgetError(int required_level, std::int64_t required_block_dim, ResourceBudget budget);
    int required_level() const { return required_level_; }
    std::int64_t required_block_dim() const { return required_block_dim_; }
    const ResourceBudget& budget() const { return budget_; }

private:
    int required_level_;
    std::int64_t required_block_dim_;
    ResourceBudget budget_;
};

struct PoweredBounds {
    double lower = 0.0;
    double upper = 0.0;
};

/// The squeeze at one exponent:
///   lower = tau[(P*P)^n]^(1/2n)
///   upper = [(2mn+1)^(3/2) C_{|q|}^(3/2)]^(1/2n) * tau[(P*P)^(2n)]^(1/4n)
/// with m = degree(P) and ||(P*P)^n||_2 = tau[(P*P)^(2n)]^(1/2).
/// Refuses with a sizing report when the working set for the level-2mn
/// expansion exceeds the budget.
PoweredBounds powered_bounds(const NcPolynomial& p, double q, int n,
                             const ResourceBudget& budget = {});

/// Generic rapid-decay bound [C (2 deg(P) n + 1)^D]^(1/2n) * l2^(1/2n), where
/// l2 = ||(P*P)^n||_2 is supplied by the caller. With C = C_{|q|}^(3/2) and
/// D = 3/2 it reproduces powered_bounds' upper exactly.
double rd_upper(double C, double D, const NcPolynomial& p, int n, double l2_of_power);

struct CertifyStep {
    int n = 0;
    double lower = 0.0;
    double upper = 0.0;
};

struct NormCertificate {
    double lower = 0.0;
    double upper = 0.0;
    double upper_direct = 0.0;
    int n_used = 0;
    int degree_m = 0;
    double q = 0.0;
    bool exhausted_budget = false;
    std::vector<CertifyStep> steps;  // one record per escalation step

    double gap() const { return upper - lower; }
};

struct CertifyOptions {
    double target_gap = 0.25;
    int max_n = 64;
    ResourceBudget budget;
    std::optional<int> fixed_n;  // run a single exponent, no escalation
};

/// Escalates n through 1, 2, 4, ... calling powered_bounds, keeping the best
/// (max) lower and best (min) upper including direct_upper, until the gap
/// closes to target_gap or the budget is exhausted. Zero polynomial yields
/// the (0, 0) certificate immediately.
NormCertificate certify_norm(const NcPolynomial& p, double q, const CertifyOptions& options = {});

}  // namespace qgauss
