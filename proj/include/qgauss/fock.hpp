#pragma once

#include <Eigen/Dense>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qgauss/ncpoly.hpp"
#include "qgauss/word.hpp"

namespace qgauss {

/// A vector of the algebraic q-Fock space, grouped by tensor level k; each
/// level is a coefficient table keyed by length-k words. Carries the q it
/// was built under and the generator count d.
class LeveledVector {
public:
    using Table = std::unordered_map<Word, double, WordHash>;

    LeveledVector(double q, Letter d);

    static LeveledVector vacuum(double q, Letter d);
    static LeveledVector basis_vector(const Word& w, double q, Letter d);

    double q() const { return q_; }
    Letter d() const { return d_; }

    /// Highest level with a nonzero entry; -1 for the zero vector.
    int max_level() const;

    bool is_zero() const { return max_level() < 0; }

    const Table& level(int k) const;
    double coefficient(int k, const Word& w) const;
    double level0() const { return coefficient(0, Word{}); }

    void add(int k, const Word& w, double c);
    void add_scaled(const LeveledVector& other, double s);

    /// Canonical form: drop exact-zero entries produced by cancellation.
    void prune_zeros();

    /// Level-k entries in canonical word order (deterministic view for
    /// output and reductions).
    std::vector<std::pair<Word, double>> sorted_level(int k) const;

private:
    double q_;
    Letter d_;
    std::vector<Table> levels_;
};

/// Memoizing evaluator for the q-inner product at fixed q. Caches are
/// per-session and transparent: results are identical with caching disabled.
class QInnerEvaluator {
public:
    explicit QInnerEvaluator(double q);
    double inner(const Word& w, const Word& v);
    double q() const { return q_; }

private:
    struct PairHash {
        std::size_t operator()(const std::pair<Word, Word>& p) const {
            WordHash h;
            return h(p.first) * 0x9e3779b97f4a7c15ull + h(p.second);
        }
    };
    double q_;
    std::unordered_map<std::pair<Word, Word>, double, PairHash> memo_;
};

/// <e_w, e_v>_q: zero unless the words have equal length and equal letter
/// multiset; otherwise the permutation sum sum_{pi} q^inv(pi), computed by
/// the annihilation recursion (memoized). Requires |q| < 1.
double q_inner(const Word& w, const Word& v, double q);

/// Gram matrix of all distinct arrangements of one letter multiset, in
/// lexicographic word order. Positive definite for |q| < 1.
struct GramBlock {
    std::vector<Word> words;
    Eigen::MatrixXd matrix;
};
GramBlock gram_block(const std::vector<Letter>& type, double q);

/// Left creation l_i: prepend letter i to every word (level k -> k+1).
LeveledVector create(Letter i, const LeveledVector& v);

/// Its adjoint l_i*: e_w -> sum over positions j with w_j = i of
/// q^(j-1) e_{w minus position j}; kills level 0.
LeveledVector annihilate(Letter i, const LeveledVector& v);

/// The q-Gaussian A_i = l_i + l_i*.
LeveledVector apply_gaussian(Letter i, const LeveledVector& v);

/// A_{w_1} ... A_{w_n} applied right to left.
LeveledVector apply_word(const Word& w, const LeveledVector& v);

/// P(A) applied to v: linear combination of word applications.
LeveledVector apply_polynomial(const NcPolynomial& p, const LeveledVector& v);

/// P(A) e_0. The level-k table is exactly the Wick coefficient table
/// {alpha_w : |w| = k} of P's homogeneous decomposition.
LeveledVector vacuum_expand(const NcPolynomial& p, double q, Letter d = 0);

/// tau(P(A)) = <P(A) e_0, e_0>_q: the level-0 coefficient of the vacuum
/// expansion. Exact: degree-m operators acting on the vacuum never exceed
/// level m, so no truncation is involved.
double moment_fock(const NcPolynomial& p, double q);

/// Quadratic form <xi_k, xi_k>_q of one level table, evaluated blockwise by
/// letter type (types are mutually orthogonal).
double level_squared_norm(const LeveledVector::Table& table, double q);

/// ||P||_2 = <xi, xi>_q^(1/2) with xi = vacuum_expand(P, q).
/// Zero iff P = 0 (the vacuum state is faithful).
double l2_norm(const NcPolynomial& p, double q);

/// Per-level L2 norms of the Wick decomposition, for the nonempty levels in
/// increasing order. Squares sum to l2_norm(P, q)^2.
std::vector<std::pair<int, double>> level_l2_norms(const NcPolynomial& p, double q);

}  // namespace qgauss
