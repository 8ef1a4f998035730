#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

#include "qgauss/word.hpp"

namespace qgauss {

/// Syntax error in the polynomial input language; position is a 0-based
/// byte offset into the input text.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::size_t position)
        : std::runtime_error(message + " (at position " + std::to_string(position) + ")"),
          position_(position) {}
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

/// A noncommutative *-polynomial in self-adjoint generators X1..Xd with real
/// coefficients. Canonical form: no stored coefficient is exactly zero.
/// Terms are kept in the canonical word order (length, then lexicographic).
class NcPolynomial {
public:
    using TermMap = std::map<Word, double>;

    NcPolynomial() = default;  // zero polynomial

    static NcPolynomial constant(double c);
    static NcPolynomial generator(Letter i);
    static NcPolynomial monomial(Word w, double c);
    static NcPolynomial from_terms(TermMap terms);

    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }
    double coefficient(const Word& w) const;

    /// Max word length among terms; the zero polynomial has degree 0.
    int degree() const;

    /// Max generator index referenced by any stored term (0 for constants).
    Letter dimension() const { return d_hint_; }

    NcPolynomial& operator+=(const NcPolynomial& rhs);
    NcPolynomial& operator-=(const NcPolynomial& rhs);
    NcPolynomial& operator*=(double s);

    bool operator==(const NcPolynomial&) const = default;

private:
    void canonicalize();

    TermMap terms_;
    Letter d_hint_ = 0;
};

NcPolynomial operator+(NcPolynomial lhs, const NcPolynomial& rhs);
NcPolynomial operator-(NcPolynomial lhs, const NcPolynomial& rhs);
NcPolynomial operator*(NcPolynomial p, double s);
NcPolynomial operator*(double s, NcPolynomial p);

/// Free-algebra product: bilinear extension of word concatenation.
NcPolynomial multiply(const NcPolynomial& lhs, const NcPolynomial& rhs);
NcPolynomial operator*(const NcPolynomial& lhs, const NcPolynomial& rhs);

/// Involution: each word reversed, real coefficients unchanged.
NcPolynomial adjoint(const NcPolynomial& p);

/// (P*P)^n, expanded. Rejects n < 1.
NcPolynomial star_power(const NcPolynomial& p, int n);

/// Parse the input language: variables X1..Xd (case-insensitive), explicit
/// `*` multiplication, `+`/`-`, `^` with a nonnegative integer exponent
/// binding to the preceding factor, parentheses, adj(expr), and decimal
/// coefficient literals. Returns the canonical expanded form.
NcPolynomial parse(std::string_view text);

/// Canonical text form; parse(format(p)) == p exactly. Zero prints as "0".
std::string format(const NcPolynomial& p);

}  // namespace qgauss
