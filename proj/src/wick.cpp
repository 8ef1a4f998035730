#include "qgauss/wick.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "qgauss/kahan.hpp"

namespace qgauss {

namespace {

// Streams letter-matching pairings without materializing them. The smallest
// unpaired position is paired only with later positions carrying the same
// letter, which prunes the (n-1)!! tree hard for mixed words. Crossings are
// accumulated incrementally: adding block (a,b) to blocks chosen so far (all
// with first element < a) adds one crossing per earlier block (c,d) with
// c < a < d < b, i.e. per open block whose endpoint lands strictly inside
// (a,b).
void fold_matchings(const Word& w, std::vector<bool>& used, std::vector<int>& ends, int cr_so_far,
                    double q, KahanSum& acc) {
    const int n = static_cast<int>(w.size());
    int a = -1;
    for (int i = 0; i < n; ++i) {
        if (!used[static_cast<std::size_t>(i)]) {
            a = i;
            break;
        }
    }
    if (a < 0) {
        acc.add(std::pow(q, cr_so_far));
        return;
    }
    used[static_cast<std::size_t>(a)] = true;
    for (int b = a + 1; b < n; ++b) {
        if (used[static_cast<std::size_t>(b)] || w[static_cast<std::size_t>(b)] != w[static_cast<std::size_t>(a)])
            continue;
        int crossings_added = 0;
        for (int e : ends)
            if (a < e && e < b) ++crossings_added;
        used[static_cast<std::size_t>(b)] = true;
        ends.push_back(b);
        fold_matchings(w, used, ends, cr_so_far + crossings_added, q, acc);
        ends.pop_back();
        used[static_cast<std::size_t>(b)] = false;
    }
    used[static_cast<std::size_t>(a)] = false;
}

}  // namespace

double wick_moment(const Word& w, double q) {
    if (!(std::abs(q) <= 1.0)) throw std::invalid_argument("wick_moment requires |q| <= 1");
    if (w.empty()) return 1.0;
    if (w.size() % 2 != 0) return 0.0;
    std::vector<bool> used(w.size(), false);
    std::vector<int> ends;
    ends.reserve(w.size() / 2);
    KahanSum acc;
    fold_matchings(w, used, ends, 0, q, acc);
    return acc.value();
}

double moment_oracle(const NcPolynomial& p, double q) {
    if (!(std::abs(q) <= 1.0)) throw std::invalid_argument("moment_oracle requires |q| <= 1");
    KahanSum acc;
    for (const auto& [w, c] : p.terms()) {
        if (w.size() % 2 != 0) continue;
        acc.add(c * wick_moment(w, q));
    }
    return acc.value();
}

}  // namespace qgauss
