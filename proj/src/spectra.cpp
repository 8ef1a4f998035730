#include "qgauss/spectra.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "qgauss/fock.hpp"

namespace qgauss {

namespace {

// All sorted multisets of `size` letters over {from..d}, lexicographic.
void enumerate_types(Letter d, int size, Letter from, std::vector<Letter>& acc,
                     std::vector<std::vector<Letter>>& out) {
    if (size == 0) {
        out.push_back(acc);
        return;
    }
    for (Letter l = from; l <= d; ++l) {
        acc.push_back(l);
        enumerate_types(d, size - 1, l, acc, out);
        acc.pop_back();
    }
}

struct TruncatedBasis {
    std::vector<Word> words;                       // level-major, type-grouped, lex in type
    std::unordered_map<Word, int, WordHash> index;
    std::vector<std::pair<int, int>> blocks;       // [begin, end) ranges sharing one Gram block
};

TruncatedBasis build_basis(Letter d, int level) {
    TruncatedBasis basis;
    for (int k = 0; k <= level; ++k) {
        std::vector<std::vector<Letter>> types;
        std::vector<Letter> acc;
        enumerate_types(d, k, 1, acc, types);
        for (const auto& type : types) {
            const int begin = static_cast<int>(basis.words.size());
            std::vector<Letter> arrangement = type;
            do {
                basis.words.emplace_back(arrangement);
            } while (std::next_permutation(arrangement.begin(), arrangement.end()));
            basis.blocks.emplace_back(begin, static_cast<int>(basis.words.size()));
        }
    }
    for (int i = 0; i < static_cast<int>(basis.words.size()); ++i)
        basis.index.emplace(basis.words[static_cast<std::size_t>(i)], i);
    return basis;
}

}  // namespace

Eigen::MatrixXd truncated_matrix(const NcPolynomial& p, double q, int level, Letter d,
                                 double* symmetry_defect) {
    if (adjoint(p) != p) {
        const NcPolynomial asym = p - adjoint(p);
        throw std::invalid_argument("truncated_matrix requires a self-adjoint polynomial; P - adj(P) = " +
                                    format(asym));
    }
    if (level < p.degree())
        throw std::invalid_argument("truncated_matrix requires level >= degree(P)");
    const Letter d_eff = std::max<Letter>({d, p.dimension(), 1});

    const TruncatedBasis basis = build_basis(d_eff, level);
    const auto dim = static_cast<Eigen::Index>(basis.words.size());

    // Word-basis action: apply P(A) exactly, then project back to levels <= N.
    Eigen::MatrixXd action = Eigen::MatrixXd::Zero(dim, dim);
    for (Eigen::Index col = 0; col < dim; ++col) {
        const Word& v = basis.words[static_cast<std::size_t>(col)];
        const LeveledVector image =
            apply_polynomial(p, LeveledVector::basis_vector(v, q, d_eff));
        for (int k = 0; k <= std::min(image.max_level(), level); ++k) {
            for (const auto& [u, c] : image.level(k)) {
                auto it = basis.index.find(u);
                if (it != basis.index.end()) action(it->second, col) += c;
            }
        }
    }

    // Block Cholesky of the Gram matrix (block diagonal by letter type).
    Eigen::MatrixXd chol = Eigen::MatrixXd::Zero(dim, dim);
    for (const auto& [begin, end] : basis.blocks) {
        const GramBlock block =
            gram_block(basis.words[static_cast<std::size_t>(begin)].letter_type(), q);
        const Eigen::Index size = end - begin;
        Eigen::LLT<Eigen::MatrixXd> llt(block.matrix);
        if (!block.matrix.allFinite() || llt.info() != Eigen::Success)
            throw std::runtime_error(
                "truncated_matrix: Gram block failed Cholesky (|q| too close to 1 for this level?)");
        chol.block(begin, begin, size, size) = llt.matrixL();
    }

    // Conjugate into the orthonormal basis: S = L^T M L^{-T}.
    Eigen::MatrixXd right = action;
    chol.transpose()
        .triangularView<Eigen::Upper>()
        .solveInPlace<Eigen::OnTheRight>(right);
    Eigen::MatrixXd sym = chol.transpose() * right;

    // The blocks were assembled type-grouped; present the result in the
    // canonical basis order (length, then lexicographic).
    std::vector<Eigen::Index> order(static_cast<std::size_t>(dim));
    for (Eigen::Index i = 0; i < dim; ++i) order[static_cast<std::size_t>(i)] = i;
    std::sort(order.begin(), order.end(), [&basis](Eigen::Index a, Eigen::Index b) {
        return basis.words[static_cast<std::size_t>(a)] < basis.words[static_cast<std::size_t>(b)];
    });
    Eigen::MatrixXd canonical(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j)
            canonical(i, j) = sym(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);

    const double defect = (canonical - canonical.transpose()).cwiseAbs().maxCoeff();
    if (symmetry_defect != nullptr) *symmetry_defect = defect;
    canonical = ((canonical + canonical.transpose()) * 0.5).eval();
    return canonical;
}

SpectrumEstimate spectrum_estimate(const NcPolynomial& p, double q, int level, Letter d) {
    const Eigen::MatrixXd matrix = truncated_matrix(p, q, level, d);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(matrix, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("spectrum_estimate: eigensolver failed");

    SpectrumEstimate out;
    out.level = level;
    out.q = q;
    out.poly_text = format(p);
    out.eigenvalues.assign(solver.eigenvalues().data(),
                           solver.eigenvalues().data() + solver.eigenvalues().size());
    std::sort(out.eigenvalues.begin(), out.eigenvalues.end());
    return out;
}

double hausdorff_distance(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty())
        throw std::invalid_argument("hausdorff_distance requires nonempty sets");
    auto one_sided = [](std::span<const double> from, std::span<const double> to) {
        double worst = 0.0;
        for (double x : from) {
            double best = std::abs(x - to[0]);
            for (double y : to) best = std::min(best, std::abs(x - y));
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(one_sided(a, b), one_sided(b, a));
}

SweepResult sweep(const NcPolynomial& p, double q_from, double q_to, int steps,
                  const SweepOptions& options) {
    if (!(std::abs(q_from) < 1.0) || !(std::abs(q_to) < 1.0))
        throw std::invalid_argument("sweep grid must stay inside (-1, 1)");
    if (steps < 2) throw std::invalid_argument("sweep requires steps >= 2");

    std::vector<double> grid(static_cast<std::size_t>(steps));
    for (int i = 0; i < steps; ++i)
        grid[static_cast<std::size_t>(i)] = q_from + (q_to - q_from) * i / (steps - 1);
    grid.back() = q_to;

    SweepResult result;
    result.rows.resize(grid.size());
    if (options.spectra_level > 0) result.spectra.resize(grid.size());

    CertifyOptions certify_options;
    certify_options.target_gap = options.target_gap;
    certify_options.max_n = options.max_n;
    certify_options.budget = options.budget;

    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= grid.size()) return;
            try {
                const double q = grid[i];
                const NormCertificate cert = certify_norm(p, q, certify_options);
                result.rows[i] = SweepRow{q,
                                          cert.lower,
                                          cert.upper,
                                          cert.upper_direct,
                                          cert.n_used,
                                          4 * cert.degree_m * cert.n_used,
                                          cert.exhausted_budget};
                if (options.spectra_level > 0)
                    result.spectra[i] = spectrum_estimate(p, q, options.spectra_level, options.d);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };

    unsigned thread_count = options.threads != 0 ? options.threads
                                                 : std::max(1u, std::thread::hardware_concurrency());
    thread_count = std::min<unsigned>(thread_count, static_cast<unsigned>(grid.size()));
    if (thread_count <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(thread_count);
        for (unsigned t = 0; t < thread_count; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);
    return result;
}

namespace {

std::string csv_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
    os << "q,lower,upper,direct_upper,n_used,level_used\n";
    for (const auto& row : rows) {
        os << csv_double(row.q) << ',' << csv_double(row.lower) << ',' << csv_double(row.upper)
           << ',' << csv_double(row.direct_upper) << ',' << row.n_used << ',' << row.level_used
           << '\n';
    }
}

namespace {

nlohmann::json spectrum_document(const SpectrumEstimate& estimate) {
    return nlohmann::json{{"q", estimate.q},
                          {"level", estimate.level},
                          {"poly", estimate.poly_text},
                          {"eigenvalues", estimate.eigenvalues}};
}

}  // namespace

std::string spectrum_to_json(const SpectrumEstimate& estimate) {
    return spectrum_document(estimate).dump(2);
}

std::string spectra_to_json(const std::vector<SpectrumEstimate>& estimates) {
    nlohmann::json array = nlohmann::json::array();
    for (const auto& estimate : estimates) array.push_back(spectrum_document(estimate));
    return array.dump(2);
}

}  // namespace qgauss
