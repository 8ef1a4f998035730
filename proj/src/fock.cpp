#include "qgauss/fock.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

#include "qgauss/kahan.hpp"

namespace qgauss {

namespace {

void require_open_interval(double q, const char* who) {
    if (!(std::abs(q) < 1.0))
        throw std::invalid_argument(std::string(who) + " requires |q| < 1");
}

void require_index(Letter i, Letter d) {
    if (i == 0 || i > d) throw std::invalid_argument("generator index out of [1, d]");
}

}  // namespace

// ---------------------------------------------------------------------------
// LeveledVector

LeveledVector::LeveledVector(double q, Letter d) : q_(q), d_(d) {
    require_open_interval(q, "LeveledVector");
}

LeveledVector LeveledVector::vacuum(double q, Letter d) {
    LeveledVector v(q, d);
    v.add(0, Word{}, 1.0);
    return v;
}

LeveledVector LeveledVector::basis_vector(const Word& w, double q, Letter d) {
    if (w.max_letter() > d) throw std::invalid_argument("basis word letter exceeds d");
    LeveledVector v(q, d);
    v.add(static_cast<int>(w.size()), w, 1.0);
    return v;
}

int LeveledVector::max_level() const {
    for (int k = static_cast<int>(levels_.size()) - 1; k >= 0; --k)
        if (!levels_[static_cast<std::size_t>(k)].empty()) return k;
    return -1;
}

const LeveledVector::Table& LeveledVector::level(int k) const {
    static const Table empty;
    if (k < 0 || k >= static_cast<int>(levels_.size())) return empty;
    return levels_[static_cast<std::size_t>(k)];
}

double LeveledVector::coefficient(int k, const Word& w) const {
    const Table& t = level(k);
    auto it = t.find(w);
    return it == t.end() ? 0.0 : it->second;
}

void LeveledVector::add(int k, const Word& w, double c) {
    if (c == 0.0) return;
    if (k != static_cast<int>(w.size()))
        throw std::invalid_argument("LeveledVector: word length must equal its level");
    if (k >= static_cast<int>(levels_.size())) levels_.resize(static_cast<std::size_t>(k) + 1);
    levels_[static_cast<std::size_t>(k)][w] += c;
}

void LeveledVector::add_scaled(const LeveledVector& other, double s) {
    if (other.q_ != q_ || other.d_ > d_)
        throw std::invalid_argument("LeveledVector: mixing vectors from different spaces");
    for (int k = 0; k < static_cast<int>(other.levels_.size()); ++k)
        for (const auto& [w, c] : other.levels_[static_cast<std::size_t>(k)]) add(k, w, s * c);
}

void LeveledVector::prune_zeros() {
    for (auto& table : levels_)
        for (auto it = table.begin(); it != table.end();)
            it = (it->second == 0.0) ? table.erase(it) : std::next(it);
}

std::vector<std::pair<Word, double>> LeveledVector::sorted_level(int k) const {
    const Table& t = level(k);
    std::vector<std::pair<Word, double>> out(t.begin(), t.end());
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
}

// ---------------------------------------------------------------------------
// q-inner product

QInnerEvaluator::QInnerEvaluator(double q) : q_(q) {
    require_open_interval(q, "QInnerEvaluator");
}

double QInnerEvaluator::inner(const Word& w, const Word& v) {
    if (w.size() != v.size()) return 0.0;
    if (w.empty()) return 1.0;
    if (w.letter_type() != v.letter_type()) return 0.0;
    auto key = std::make_pair(w, v);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    // <e_{iw'}, e_v> = sum over positions j of v carrying letter i of
    // q^(j-1) <e_{w'}, e_{v minus j}>; this is <l_i u, v> = <u, l_i* v>
    // unrolled, and it reproduces the S_m inversion sum. Removals within one
    // run of equal letters give the same shorter word, so each run costs a
    // single recursive call with its q-powers summed.
    const Letter head = w[0];
    const Word tail = w.without_position(0);
    double acc = 0.0;
    double q_pow = 1.0;
    std::size_t j = 0;
    while (j < v.size()) {
        std::size_t run_end = j + 1;
        while (run_end < v.size() && v[run_end] == v[j]) ++run_end;
        if (v[j] == head) {
            double run_sum = 0.0;
            for (std::size_t t = j; t < run_end; ++t) {
                run_sum += q_pow;
                q_pow *= q_;
            }
            acc += run_sum * inner(tail, v.without_position(j));
        } else {
            for (std::size_t t = j; t < run_end; ++t) q_pow *= q_;
        }
        j = run_end;
    }
    memo_.emplace(std::move(key), acc);
    return acc;
}

double q_inner(const Word& w, const Word& v, double q) {
    QInnerEvaluator eval(q);
    return eval.inner(w, v);
}

GramBlock gram_block(const std::vector<Letter>& type, double q) {
    require_open_interval(q, "gram_block");
    std::vector<Letter> sorted_type = type;
    std::sort(sorted_type.begin(), sorted_type.end());
    if (!sorted_type.empty() && sorted_type.front() == 0)
        throw std::invalid_argument("gram_block: letters are 1-based");

    GramBlock block;
    std::vector<Letter> arrangement = sorted_type;
    do {
        block.words.emplace_back(arrangement);
    } while (std::next_permutation(arrangement.begin(), arrangement.end()));

    const auto n = static_cast<Eigen::Index>(block.words.size());
    block.matrix.resize(n, n);
    QInnerEvaluator eval(q);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i; j < n; ++j) {
            const double value = eval.inner(block.words[static_cast<std::size_t>(i)],
                                            block.words[static_cast<std::size_t>(j)]);
            block.matrix(i, j) = value;
            block.matrix(j, i) = value;
        }
    }
    return block;
}

// ---------------------------------------------------------------------------
// Operators

LeveledVector create(Letter i, const LeveledVector& v) {
    require_index(i, v.d());
    LeveledVector out(v.q(), v.d());
    for (int k = 0; k <= v.max_level(); ++k)
        for (const auto& [w, c] : v.level(k)) out.add(k + 1, w.with_prefix(i), c);
    return out;
}

namespace {

// l_i* on a single word. Removing any position inside a maximal run of equal
// letters yields the same shorter word, so one output per run suffices with
// the run's q-powers summed; this keeps single-variable words O(1) wide.
void annihilate_word(Letter i, const Word& w, double c, double q, int k, LeveledVector& out) {
    double q_pow = 1.0;
    std::size_t j = 0;
    while (j < w.size()) {
        std::size_t run_end = j + 1;
        while (run_end < w.size() && w[run_end] == w[j]) ++run_end;
        if (w[j] == i) {
            double run_sum = 0.0;
            for (std::size_t t = j; t < run_end; ++t) {
                run_sum += q_pow;
                q_pow *= q;
            }
            out.add(k - 1, w.without_position(j), c * run_sum);
        } else {
            for (std::size_t t = j; t < run_end; ++t) q_pow *= q;
        }
        j = run_end;
    }
}

}  // namespace

LeveledVector annihilate(Letter i, const LeveledVector& v) {
    require_index(i, v.d());
    const double q = v.q();
    LeveledVector out(q, v.d());
    for (int k = 1; k <= v.max_level(); ++k)
        for (const auto& [w, c] : v.level(k)) annihilate_word(i, w, c, q, k, out);
    out.prune_zeros();
    return out;
}

LeveledVector apply_gaussian(Letter i, const LeveledVector& v) {
    require_index(i, v.d());
    const double q = v.q();
    LeveledVector out(q, v.d());
    for (int k = 0; k <= v.max_level(); ++k) {
        for (const auto& [w, c] : v.level(k)) {
            out.add(k + 1, w.with_prefix(i), c);
            annihilate_word(i, w, c, q, k, out);
        }
    }
    out.prune_zeros();
    return out;
}

LeveledVector apply_word(const Word& w, const LeveledVector& v) {
    LeveledVector out = v;
    for (std::size_t t = w.size(); t > 0; --t) out = apply_gaussian(w[t - 1], out);
    return out;
}

LeveledVector apply_polynomial(const NcPolynomial& p, const LeveledVector& v) {
    LeveledVector out(v.q(), v.d());
    for (const auto& [w, c] : p.terms()) out.add_scaled(apply_word(w, v), c);
    out.prune_zeros();
    return out;
}

LeveledVector vacuum_expand(const NcPolynomial& p, double q, Letter d) {
    require_open_interval(q, "vacuum_expand");
    const Letter d_eff = std::max<Letter>({d, p.dimension(), 1});
    return apply_polynomial(p, LeveledVector::vacuum(q, d_eff));
}

double moment_fock(const NcPolynomial& p, double q) {
    return vacuum_expand(p, q).level0();
}

double level_squared_norm(const LeveledVector::Table& table, double q) {
    // Group by letter type; distinct types are orthogonal, so the level Gram
    // is block diagonal and only present words matter.
    std::map<std::vector<Letter>, std::vector<std::pair<Word, double>>> by_type;
    for (const auto& [w, c] : table) by_type[w.letter_type()].emplace_back(w, c);

    KahanSum acc;
    QInnerEvaluator eval(q);
    for (auto& [type, entries] : by_type) {
        std::sort(entries.begin(), entries.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        for (std::size_t i = 0; i < entries.size(); ++i) {
            acc.add(entries[i].second * entries[i].second *
                    eval.inner(entries[i].first, entries[i].first));
            for (std::size_t j = i + 1; j < entries.size(); ++j)
                acc.add(2.0 * entries[i].second * entries[j].second *
                        eval.inner(entries[i].first, entries[j].first));
        }
    }
    return acc.value();
}

double l2_norm(const NcPolynomial& p, double q) {
    const LeveledVector xi = vacuum_expand(p, q);
    KahanSum acc;
    for (int k = 0; k <= xi.max_level(); ++k) acc.add(level_squared_norm(xi.level(k), q));
    return std::sqrt(std::max(0.0, acc.value()));
}

std::vector<std::pair<int, double>> level_l2_norms(const NcPolynomial& p, double q) {
    const LeveledVector xi = vacuum_expand(p, q);
    std::vector<std::pair<int, double>> out;
    for (int k = 0; k <= xi.max_level(); ++k) {
        if (xi.level(k).empty()) continue;
        out.emplace_back(k, std::sqrt(std::max(0.0, level_squared_norm(xi.level(k), q))));
    }
    return out;
}

}  // namespace qgauss
