#include <doctest.h>

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "qgauss/fock.hpp"
#include "qgauss/ncpoly.hpp"
#include "qgauss/wick.hpp"

using qgauss::LeveledVector;
using qgauss::Letter;
using qgauss::NcPolynomial;
using qgauss::Word;

namespace {

// Verbatim-definition oracle: sum over all permutations pi in S_m with
// v[pi(i)] = w[i], weighted by q^inv(pi).
double inner_by_permutation_sum(const Word& w, const Word& v, double q) {
    if (w.size() != v.size()) return 0.0;
    const int m = static_cast<int>(w.size());
    std::vector<int> pi(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) pi[static_cast<std::size_t>(i)] = i;
    double total = 0.0;
    do {
        bool match = true;
        for (int i = 0; i < m && match; ++i)
            match = v[static_cast<std::size_t>(pi[static_cast<std::size_t>(i)])] ==
                    w[static_cast<std::size_t>(i)];
        if (!match) continue;
        int inv = 0;
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j)
                if (pi[static_cast<std::size_t>(i)] > pi[static_cast<std::size_t>(j)]) ++inv;
        total += std::pow(q, inv);
    } while (std::next_permutation(pi.begin(), pi.end()));
    return total;
}

std::vector<Word> all_words(Letter d, int length) {
    std::vector<Word> out;
    std::vector<Letter> current(static_cast<std::size_t>(length), 1);
    if (length == 0) {
        out.emplace_back();
        return out;
    }
    for (;;) {
        out.emplace_back(std::vector<Letter>(current));
        int pos = length - 1;
        while (pos >= 0 && current[static_cast<std::size_t>(pos)] == d) {
            current[static_cast<std::size_t>(pos)] = 1;
            --pos;
        }
        if (pos < 0) break;
        ++current[static_cast<std::size_t>(pos)];
    }
    return out;
}

LeveledVector random_vector(std::mt19937& rng, double q, Letter d, int max_level) {
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    std::uniform_int_distribution<int> letter(1, d);
    std::uniform_int_distribution<int> count(1, 4);
    LeveledVector v(q, d);
    for (int k = 0; k <= max_level; ++k) {
        const int entries = count(rng);
        for (int e = 0; e < entries; ++e) {
            std::vector<Letter> letters;
            for (int i = 0; i < k; ++i) letters.push_back(static_cast<Letter>(letter(rng)));
            v.add(k, Word(std::move(letters)), coeff(rng));
        }
    }
    return v;
}

double q_inner_product(const LeveledVector& a, const LeveledVector& b) {
    qgauss::QInnerEvaluator eval(a.q());
    double total = 0.0;
    const int top = std::max(a.max_level(), b.max_level());
    for (int k = 0; k <= top; ++k)
        for (const auto& [w, cw] : a.level(k))
            for (const auto& [v, cv] : b.level(k)) total += cw * cv * eval.inner(w, v);
    return total;
}

}  // namespace

TEST_CASE("q_inner: small words") {
    const double q = 0.37;
    CHECK(qgauss::q_inner(Word{1, 2}, Word{1, 2}, q) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(qgauss::q_inner(Word{1, 2}, Word{2, 1}, q) == doctest::Approx(q).epsilon(1e-15));
    CHECK(qgauss::q_inner(Word{1, 1}, Word{1, 1}, q) == doctest::Approx(1.0 + q).epsilon(1e-15));
    CHECK(qgauss::q_inner(Word{1}, Word{1, 1}, q) == 0.0);
    CHECK(qgauss::q_inner(Word{1, 1}, Word{1, 2}, q) == 0.0);
    CHECK_THROWS_AS(qgauss::q_inner(Word{1}, Word{1}, 1.0), std::invalid_argument);
}

TEST_CASE("q_inner: recursion equals the S_m inversion sum, exhaustively") {
    for (double q : {-0.8, -0.3, 0.0, 0.5, 0.9}) {
        for (int len = 0; len <= 6; ++len) {
            const auto words = all_words(2, len);
            for (const Word& w : words)
                for (const Word& v : words)
                    CHECK(qgauss::q_inner(w, v, q) ==
                          doctest::Approx(inner_by_permutation_sum(w, v, q)).epsilon(1e-12));
        }
        for (int len = 0; len <= 4; ++len) {
            const auto words = all_words(3, len);
            for (const Word& w : words)
                for (const Word& v : words)
                    CHECK(qgauss::q_inner(w, v, q) ==
                          doctest::Approx(inner_by_permutation_sum(w, v, q)).epsilon(1e-12));
        }
    }
    // d = 3 at lengths 5 and 6: every same-type pair (the nonzero cases),
    // plus spot checks that cross-type pairs vanish.
    for (double q : {-0.6, 0.4}) {
        for (int len = 5; len <= 6; ++len) {
            const auto words = all_words(3, len);
            std::mt19937 rng(811 + len);
            std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1);
            for (const Word& w : words)
                for (const Word& v : words)
                    if (w.letter_type() == v.letter_type())
                        CHECK(qgauss::q_inner(w, v, q) ==
                              doctest::Approx(inner_by_permutation_sum(w, v, q)).epsilon(1e-12));
            for (int trial = 0; trial < 200; ++trial) {
                const Word& w = words[pick(rng)];
                const Word& v = words[pick(rng)];
                if (w.letter_type() != v.letter_type()) CHECK(qgauss::q_inner(w, v, q) == 0.0);
            }
        }
    }
}

TEST_CASE("gram_block: small blocks") {
    const double q = 0.41;
    const auto single = qgauss::gram_block({1}, q);
    CHECK(single.words.size() == 1);
    CHECK(single.matrix(0, 0) == 1.0);

    const auto repeated = qgauss::gram_block({1, 1}, q);
    CHECK(repeated.words.size() == 1);
    CHECK(repeated.matrix(0, 0) == doctest::Approx(1.0 + q).epsilon(1e-15));

    const auto mixed = qgauss::gram_block({1, 2}, q);
    REQUIRE(mixed.words.size() == 2);
    CHECK(mixed.words[0] == Word{1, 2});
    CHECK(mixed.words[1] == Word{2, 1});
    CHECK(mixed.matrix(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(mixed.matrix(0, 1) == doctest::Approx(q).epsilon(1e-15));
    CHECK(mixed.matrix(1, 0) == doctest::Approx(q).epsilon(1e-15));
}

TEST_CASE("gram diagonal: >= 1 for q >= 0, positive always") {
    // Every matching permutation contributes q^inv >= 0 when q >= 0, and the
    // identity alone gives 1; negative q can pull diagonals below 1
    // (<e_11, e_11> = 1 + q) but positive definiteness keeps them positive.
    for (const auto& type :
         std::vector<std::vector<Letter>>{{1}, {1, 1}, {1, 2}, {1, 1, 2}, {1, 2, 3}, {1, 1, 2, 2}}) {
        for (double q : {0.0, 0.3, 0.8}) {
            const auto block = qgauss::gram_block(type, q);
            for (Eigen::Index i = 0; i < block.matrix.rows(); ++i)
                CHECK(block.matrix(i, i) >= 1.0);
        }
        for (double q : {-0.8, -0.3}) {
            const auto block = qgauss::gram_block(type, q);
            for (Eigen::Index i = 0; i < block.matrix.rows(); ++i)
                CHECK(block.matrix(i, i) > 0.0);
        }
    }
    CHECK(qgauss::q_inner(Word{1, 1}, Word{1, 1}, -0.5) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("gram blocks are positive definite up to level 6, d <= 3, |q| <= 0.95") {
    for (double q : {-0.95, -0.6, 0.0, 0.6, 0.95}) {
        for (Letter d = 1; d <= 3; ++d) {
            for (int level = 1; level <= 6; ++level) {
                // Every letter type at this level: partition the level among letters.
                std::vector<std::vector<Letter>> types;
                std::vector<Letter> acc;
                auto rec = [&](auto&& self, Letter from, int remaining) -> void {
                    if (remaining == 0) {
                        types.push_back(acc);
                        return;
                    }
                    for (Letter l = from; l <= d; ++l) {
                        acc.push_back(l);
                        self(self, l, remaining - 1);
                        acc.pop_back();
                    }
                };
                rec(rec, 1, level);
                for (const auto& type : types) {
                    const auto block = qgauss::gram_block(type, q);
                    Eigen::LLT<Eigen::MatrixXd> llt(block.matrix);
                    CHECK(llt.info() == Eigen::Success);
                }
            }
        }
    }
}

TEST_CASE("annihilate and apply_gaussian: examples") {
    const double q = 0.6;
    const auto e0 = LeveledVector::vacuum(q, 2);
    const auto e1 = LeveledVector::basis_vector(Word{1}, q, 2);
    const auto e2 = LeveledVector::basis_vector(Word{2}, q, 2);
    const auto e11 = LeveledVector::basis_vector(Word{1, 1}, q, 2);

    CHECK(qgauss::annihilate(1, e1).level0() == 1.0);
    CHECK(qgauss::annihilate(1, e11).coefficient(1, Word{1}) ==
          doctest::Approx(1.0 + q).epsilon(1e-15));
    CHECK(qgauss::annihilate(1, e2).is_zero());
    CHECK(qgauss::annihilate(1, e0).is_zero());

    const auto a1_e0 = qgauss::apply_gaussian(1, e0);
    CHECK(a1_e0.coefficient(1, Word{1}) == 1.0);
    CHECK(a1_e0.level(0).empty());

    const auto a1_e1 = qgauss::apply_gaussian(1, e1);
    CHECK(a1_e1.coefficient(2, Word{1, 1}) == 1.0);
    CHECK(a1_e1.level0() == 1.0);

    const auto a1_e2 = qgauss::apply_gaussian(1, e2);
    CHECK(a1_e2.coefficient(2, Word{1, 2}) == 1.0);
    CHECK(a1_e2.level(0).empty());

    CHECK_THROWS_AS(qgauss::apply_gaussian(3, e1), std::invalid_argument);
    CHECK_THROWS_AS(qgauss::annihilate(0, e1), std::invalid_argument);
}

TEST_CASE("vacuum_expand: examples") {
    const double q = 0.3;
    const auto x1 = qgauss::vacuum_expand(qgauss::parse("X1"), q);
    CHECK(x1.coefficient(1, Word{1}) == 1.0);
    CHECK(x1.max_level() == 1);

    const auto x1sq = qgauss::vacuum_expand(qgauss::parse("X1^2"), q);
    CHECK(x1sq.level0() == 1.0);
    CHECK(x1sq.coefficient(2, Word{1, 1}) == 1.0);
    const auto level2 = x1sq.sorted_level(2);
    REQUIRE(level2.size() == 1);
    CHECK(level2[0].first == Word{1, 1});

    const auto x1x2 = qgauss::vacuum_expand(qgauss::parse("X1*X2"), q);
    CHECK(x1x2.coefficient(2, Word{1, 2}) == 1.0);
    CHECK(x1x2.level(0).empty());
}

TEST_CASE("moment_fock: examples and endpoint guard") {
    CHECK(qgauss::moment_fock(qgauss::parse("X1^2"), 0.7) == 1.0);
    CHECK(qgauss::moment_fock(qgauss::parse("X1^4"), 0.5) == doctest::Approx(2.5).epsilon(1e-15));
    for (double q : {-0.6, 0.2, 0.8})
        CHECK(qgauss::moment_fock(qgauss::parse("X1*X2*X1*X2"), q) ==
              doctest::Approx(q).epsilon(1e-14));
    CHECK_THROWS_AS(qgauss::moment_fock(qgauss::parse("X1^2"), 1.0), std::invalid_argument);
}

TEST_CASE("dual path: moment_fock equals wick_moment on words up to length 6") {
    for (double q : {-0.9, -0.5, 0.0, 0.3, 0.7}) {
        for (int len = 0; len <= 6; ++len) {
            for (const Word& w : all_words(2, len)) {
                const NcPolynomial p = NcPolynomial::monomial(w, 1.0);
                CHECK(qgauss::moment_fock(p, q) ==
                      doctest::Approx(qgauss::wick_moment(w, q)).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("adjointness: <l_i u, v> = <u, l_i* v> on random leveled vectors") {
    std::mt19937 rng(31337);
    for (double q : {-0.7, 0.0, 0.5}) {
        for (int trial = 0; trial < 12; ++trial) {
            const Letter d = 2;
            const LeveledVector u = random_vector(rng, q, d, 4);
            const LeveledVector v = random_vector(rng, q, d, 5);
            for (Letter i = 1; i <= d; ++i) {
                const double lhs = q_inner_product(qgauss::create(i, u), v);
                const double rhs = q_inner_product(u, qgauss::annihilate(i, v));
                CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("l2_norm: examples") {
    CHECK(qgauss::l2_norm(qgauss::parse("X1"), 0.5) == doctest::Approx(1.0).epsilon(1e-15));
    for (double q : {-0.5, 0.0, 0.6})
        CHECK(qgauss::l2_norm(qgauss::parse("X1^2"), q) ==
              doctest::Approx(std::sqrt(2.0 + q)).epsilon(1e-14));
    CHECK(qgauss::l2_norm(qgauss::parse("X1*X2"), 0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(qgauss::l2_norm(NcPolynomial(), 0.4) == 0.0);
}

TEST_CASE("level_l2_norms: examples and Pythagoras") {
    const double q = 0.45;
    const auto levels = qgauss::level_l2_norms(qgauss::parse("X1^2"), q);
    REQUIRE(levels.size() == 2);
    CHECK(levels[0].first == 0);
    CHECK(levels[0].second == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(levels[1].first == 2);
    CHECK(levels[1].second == doctest::Approx(std::sqrt(1.0 + q)).epsilon(1e-14));

    const auto single = qgauss::level_l2_norms(qgauss::parse("X1"), q);
    REQUIRE(single.size() == 1);
    CHECK(single[0] == std::pair<int, double>(1, 1.0));

    const auto constant = qgauss::level_l2_norms(qgauss::parse("3"), q);
    REQUIRE(constant.size() == 1);
    CHECK(constant[0].first == 0);
    CHECK(constant[0].second == doctest::Approx(3.0).epsilon(1e-15));

    // Pythagoras on random polynomials, degree <= 5.
    std::mt19937 rng(5551);
    std::uniform_int_distribution<int> letter(1, 2);
    std::uniform_real_distribution<double> coeff(-2.0, 2.0);
    for (int trial = 0; trial < 25; ++trial) {
        NcPolynomial::TermMap terms;
        for (int t = 0; t < 6; ++t) {
            const int len = (trial + t) % 6;
            std::vector<Letter> letters;
            for (int i = 0; i < len; ++i) letters.push_back(static_cast<Letter>(letter(rng)));
            terms[Word(std::move(letters))] += coeff(rng);
        }
        const NcPolynomial p = NcPolynomial::from_terms(std::move(terms));
        for (double q2 : {-0.6, 0.0, 0.7}) {
            double sum_squares = 0.0;
            for (const auto& [k, norm] : qgauss::level_l2_norms(p, q2)) sum_squares += norm * norm;
            const double total = qgauss::l2_norm(p, q2);
            CHECK(sum_squares == doctest::Approx(total * total).epsilon(1e-12));
        }
    }
}

TEST_CASE("l2_norm squared equals tau(P*P) through both moment engines") {
    std::mt19937 rng(140);
    std::uniform_int_distribution<int> letter(1, 2);
    std::uniform_int_distribution<int> len(0, 3);
    std::uniform_real_distribution<double> coeff(-2.0, 2.0);
    for (int trial = 0; trial < 20; ++trial) {
        NcPolynomial::TermMap terms;
        for (int t = 0; t < 4; ++t) {
            std::vector<Letter> letters;
            const int length = len(rng);
            for (int i = 0; i < length; ++i) letters.push_back(static_cast<Letter>(letter(rng)));
            terms[Word(std::move(letters))] += coeff(rng);
        }
        const NcPolynomial p = NcPolynomial::from_terms(std::move(terms));
        const NcPolynomial pp = multiply(qgauss::adjoint(p), p);
        for (double q : {-0.7, 0.0, 0.5}) {
            const double via_gram = std::pow(qgauss::l2_norm(p, q), 2);
            CHECK(via_gram == doctest::Approx(qgauss::moment_fock(pp, q)).epsilon(1e-11));
            CHECK(via_gram == doctest::Approx(qgauss::moment_oracle(pp, q)).epsilon(1e-11));
        }
    }
}

TEST_CASE("LeveledVector validates levels and spaces") {
    LeveledVector v(0.5, 2);
    CHECK_THROWS_AS(v.add(1, Word{1, 2}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(LeveledVector(1.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(LeveledVector::basis_vector(Word{3}, 0.5, 2), std::invalid_argument);
}
