#pragma once

#include "qgauss/ncpoly.hpp"
#include "qgauss/word.hpp"

namespace qgauss {

/// Joint moment tau(A_{w1} ... A_{wn}) straight from the pair-partition
/// formula: sum over letter-matching pair partitions of q^(crossings).
/// Valid on the closed interval |q| <= 1. Odd-length words give 0, the
/// empty word gives 1. This is the oracle path; the Fock engine must agree.
double wick_moment(const Word& w, double q);

/// Linear extension of the vacuum trace to polynomials:
/// sum of coefficient * wick_moment(word, q).
double moment_oracle(const NcPolynomial& p, double q);

}  // namespace qgauss
