#include "qgauss/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "qgauss/fock.hpp"
#include "qgauss/kahan.hpp"

namespace qgauss {

HaagerupConstant haagerup_constant(double q, double rel_tol) {
    const double t = std::abs(q);
    if (!(t < 1.0))
        throw std::invalid_argument("haagerup_constant requires |q| < 1 (the product vanishes at |q| = 1)");
    if (!(rel_tol > 0.0)) throw std::invalid_argument("haagerup_constant requires rel_tol > 0");

    HaagerupConstant out;
    out.q_abs = t;
    if (t == 0.0) return out;  // empty product, C_0 = 1 exactly

    // Tail of the log-sum: sum_{m>M} -log(1-t^m) <= sum_{m>M} t^m/(1-t^m)
    //                     <= t^(M+1) / ((1-t)(1-t^(M+1))).
    auto tail = [t](int m_terms) {
        const double head = std::pow(t, m_terms + 1);
        return head / ((1.0 - t) * (1.0 - head));
    };

    int m_terms = 1;
    while (tail(m_terms) > rel_tol && m_terms < 1'000'000) ++m_terms;

    double product = 1.0;
    double t_pow = 1.0;
    for (int m = 1; m <= m_terms; ++m) {
        t_pow *= t;
        product *= 1.0 - t_pow;
    }
    out.value = 1.0 / product;
    out.truncation_terms = m_terms;
    out.tail_bound = tail(m_terms);
    return out;
}

double direct_upper(const NcPolynomial& p, double q) {
    const double c32 = std::pow(haagerup_constant(q).value, 1.5);
    KahanSum acc;
    for (const auto& [k, norm] : level_l2_norms(p, q)) acc.add((k + 1) * c32 * norm);
    return acc.value();
}

double direct_upper_aggregate(const NcPolynomial& p, double q) {
    if (p.is_zero()) return 0.0;
    const double c32 = std::pow(haagerup_constant(q).value, 1.5);
    return std::pow(p.degree() + 1, 1.5) * c32 * l2_norm(p, q);
}

BudgetError::BudgetError(int required_level, std::int64_t required_block_dim, ResourceBudget budget)
    : std::runtime_error("powered-moment budget exceeded: needs Fock level " +
                         std::to_string(required_level) + " (max " +
                         std::to_string(budget.max_level) + ") and level-dimension " +
                         std::to_string(required_block_dim) + " (max " +
                         std::to_string(budget.max_block_dim) + ")"),
      required_level_(required_level),
      required_block_dim_(required_block_dim),
      budget_(budget) {}

namespace {

// Word count at one Fock level, saturating.
std::int64_t level_dimension(Letter d, int level) {
    constexpr std::int64_t kCap = std::int64_t(1) << 62;
    std::int64_t dim = 1;
    for (int k = 0; k < level; ++k) {
        if (dim > kCap / std::max<int>(d, 1)) return kCap;
        dim *= std::max<int>(d, 1);
    }
    return dim;
}

void check_budget(const NcPolynomial& p, int n, const ResourceBudget& budget) {
    const int m = p.degree();
    const int required_level = 4 * m * n;  // the tau[(P*P)^(2n)] pass tops out here
    const std::int64_t dim_2mn = level_dimension(p.dimension(), 2 * m * n);
    if (required_level > budget.max_level || dim_2mn > budget.max_block_dim)
        throw BudgetError(required_level, dim_2mn, budget);
}

// Incremental vacuum moments tau[(P*P)^j]: applying P then P* to the running
// state advances j by one, since the product of polynomials is the product
// of the operators. One pass to j = 2n serves both the lower bound (j = n)
// and the L2 norm of the power (j = 2n).
class StarPowerTrace {
public:
    StarPowerTrace(const NcPolynomial& p, double q)
        : p_(p),
          p_adj_(adjoint(p)),
          state_(LeveledVector::vacuum(q, std::max<Letter>(p.dimension(), 1))) {
        moments_.push_back(1.0);
    }

    double moment(int j) {
        while (static_cast<int>(moments_.size()) <= j) {
            state_ = apply_polynomial(p_, state_);
            state_ = apply_polynomial(p_adj_, state_);
            moments_.push_back(state_.level0());
        }
        return moments_[static_cast<std::size_t>(j)];
    }

private:
    NcPolynomial p_;
    NcPolynomial p_adj_;
    LeveledVector state_;
    std::vector<double> moments_;
};

PoweredBounds bounds_from_moments(double c32, int m, int n, double t_n, double t_2n) {
    PoweredBounds out;
    out.lower = std::pow(std::max(0.0, t_n), 1.0 / (2.0 * n));
    const double prefactor = std::pow(2.0 * m * n + 1.0, 1.5) * c32;
    out.upper = std::pow(prefactor, 1.0 / (2.0 * n)) *
                std::pow(std::max(0.0, t_2n), 1.0 / (4.0 * n));
    return out;
}

}  // namespace

PoweredBounds powered_bounds(const NcPolynomial& p, double q, int n, const ResourceBudget& budget) {
    if (n < 1) throw std::invalid_argument("powered_bounds requires n >= 1");
    if (p.is_zero()) throw std::invalid_argument("powered_bounds requires P != 0");
    check_budget(p, n, budget);
    const double c32 = std::pow(haagerup_constant(q).value, 1.5);
    StarPowerTrace trace(p, q);
    return bounds_from_moments(c32, p.degree(), n, trace.moment(n), trace.moment(2 * n));
}

double rd_upper(double C, double D, const NcPolynomial& p, int n, double l2_of_power) {
    if (n < 1) throw std::invalid_argument("rd_upper requires n >= 1");
    if (C < 0.0 || D < 0.0) throw std::invalid_argument("rd_upper requires C, D >= 0");
    const double prefactor = C * std::pow(2.0 * p.degree() * n + 1.0, D);
    return std::pow(prefactor, 1.0 / (2.0 * n)) * std::pow(l2_of_power, 1.0 / (2.0 * n));
}

NormCertificate certify_norm(const NcPolynomial& p, double q, const CertifyOptions& options) {
    NormCertificate cert;
    cert.q = q;
    cert.degree_m = p.degree();
    if (p.is_zero()) return cert;

    if (!(options.target_gap > 0.0) && !options.fixed_n)
        throw std::invalid_argument("certify_norm requires target_gap > 0 or a fixed n");

    cert.upper_direct = direct_upper(p, q);
    cert.upper = cert.upper_direct;
    const double c32 = std::pow(haagerup_constant(q).value, 1.5);

    StarPowerTrace trace(p, q);
    const int m = p.degree();

    auto run_step = [&](int n) {
        const PoweredBounds pb =
            bounds_from_moments(c32, m, n, trace.moment(n), trace.moment(2 * n));
        cert.lower = std::max(cert.lower, pb.lower);
        cert.upper = std::min(cert.upper, pb.upper);
        cert.n_used = n;
        cert.steps.push_back({n, cert.lower, cert.upper});
    };

    if (options.fixed_n) {
        // Single-exponent mode: the caller asked for this n, so finishing it
        // is success regardless of the resulting gap.
        const int n = *options.fixed_n;
        if (n < 1) throw std::invalid_argument("certify_norm: fixed n must be >= 1");
        check_budget(p, n, options.budget);
        run_step(n);
        return cert;
    }

    // Geometric schedule: cost grows exponentially with the level 2mn, so
    // doubling n keeps the total within a constant factor of the last step.
    for (int n = 1; n <= options.max_n; n *= 2) {
        try {
            check_budget(p, n, options.budget);
        } catch (const BudgetError&) {
            if (cert.n_used == 0) throw;  // cannot even start
            cert.exhausted_budget = true;
            return cert;
        }
        run_step(n);
        if (cert.gap() <= options.target_gap) return cert;
    }
    cert.exhausted_budget = true;
    return cert;
}

}  // namespace qgauss
