#include "qgauss/ncpoly.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>

namespace qgauss {

std::vector<Letter> Word::letter_type() const {
    std::vector<Letter> type = letters_;
    std::sort(type.begin(), type.end());
    return type;
}

std::string to_string(const Word& w) {
    if (w.empty()) return "1";
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i > 0) out += '*';
        out += 'X';
        out += std::to_string(static_cast<int>(w[i]));
    }
    return out;
}

// ---------------------------------------------------------------------------
// NcPolynomial

NcPolynomial NcPolynomial::constant(double c) {
    NcPolynomial p;
    p.terms_[Word{}] = c;
    p.canonicalize();
    return p;
}

NcPolynomial NcPolynomial::generator(Letter i) {
    if (i == 0) throw std::invalid_argument("generator index must be >= 1");
    NcPolynomial p;
    p.terms_[Word({static_cast<int>(i)})] = 1.0;
    p.d_hint_ = i;
    return p;
}

NcPolynomial NcPolynomial::monomial(Word w, double c) {
    NcPolynomial p;
    p.terms_[std::move(w)] = c;
    p.canonicalize();
    return p;
}

NcPolynomial NcPolynomial::from_terms(TermMap terms) {
    NcPolynomial p;
    p.terms_ = std::move(terms);
    p.canonicalize();
    return p;
}

double NcPolynomial::coefficient(const Word& w) const {
    auto it = terms_.find(w);
    return it == terms_.end() ? 0.0 : it->second;
}

int NcPolynomial::degree() const {
    if (terms_.empty()) return 0;
    // Map order is length-then-lex, so the last key is longest.
    return static_cast<int>(terms_.rbegin()->first.size());
}

void NcPolynomial::canonicalize() {
    d_hint_ = 0;
    for (auto it = terms_.begin(); it != terms_.end();) {
        if (it->second == 0.0) {
            it = terms_.erase(it);
        } else {
            d_hint_ = std::max(d_hint_, it->first.max_letter());
            ++it;
        }
    }
}

NcPolynomial& NcPolynomial::operator+=(const NcPolynomial& rhs) {
    for (const auto& [w, c] : rhs.terms_) terms_[w] += c;
    canonicalize();
    return *this;
}

NcPolynomial& NcPolynomial::operator-=(const NcPolynomial& rhs) {
    for (const auto& [w, c] : rhs.terms_) terms_[w] -= c;
    canonicalize();
    return *this;
}

NcPolynomial& NcPolynomial::operator*=(double s) {
    for (auto& [w, c] : terms_) c *= s;
    canonicalize();
    return *this;
}

NcPolynomial operator+(NcPolynomial lhs, const NcPolynomial& rhs) { return lhs += rhs; }
NcPolynomial operator-(NcPolynomial lhs, const NcPolynomial& rhs) { return lhs -= rhs; }
NcPolynomial operator*(NcPolynomial p, double s) { return p *= s; }
NcPolynomial operator*(double s, NcPolynomial p) { return p *= s; }

NcPolynomial multiply(const NcPolynomial& lhs, const NcPolynomial& rhs) {
    NcPolynomial::TermMap out;
    for (const auto& [w1, c1] : lhs.terms())
        for (const auto& [w2, c2] : rhs.terms()) out[w1.concat(w2)] += c1 * c2;
    return NcPolynomial::from_terms(std::move(out));
}

NcPolynomial operator*(const NcPolynomial& lhs, const NcPolynomial& rhs) {
    return multiply(lhs, rhs);
}

NcPolynomial adjoint(const NcPolynomial& p) {
    NcPolynomial::TermMap out;
    for (const auto& [w, c] : p.terms()) out[w.reversed()] = c;
    return NcPolynomial::from_terms(std::move(out));
}

NcPolynomial star_power(const NcPolynomial& p, int n) {
    if (n < 1) throw std::invalid_argument("star_power requires n >= 1");
    const NcPolynomial base = multiply(adjoint(p), p);
    NcPolynomial out = base;
    for (int i = 1; i < n; ++i) out = multiply(out, base);
    return out;
}

// ---------------------------------------------------------------------------
// Parser: recursive descent over
//   expression := [+|-] term ((+|-) term)*
//   term       := factor (* factor)*
//   factor     := primary (^ uint)*
//   primary    := number | X<digits> | ( expression ) | adj( expression )

namespace {

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    NcPolynomial run() {
        NcPolynomial p = expression();
        skip_space();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return p;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& message) const { throw ParseError(message, pos_); }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    char peek() {
        skip_space();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    bool consume(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NcPolynomial expression() {
        double sign = 1.0;
        if (consume('-'))
            sign = -1.0;
        else
            consume('+');
        NcPolynomial acc = term() * sign;
        for (;;) {
            char c = peek();
            if (c == '+') {
                ++pos_;
                acc += term();
            } else if (c == '-') {
                ++pos_;
                acc -= term();
            } else {
                return acc;
            }
        }
    }

    NcPolynomial term() {
        NcPolynomial acc = factor();
        while (consume('*')) acc = multiply(acc, factor());
        return acc;
    }

    NcPolynomial factor() {
        NcPolynomial base = primary();
        while (consume('^')) {
            const std::size_t before = pos_;
            const int e = exponent();
            if (base.term_count() > 1) {
                // t^e terms for a t-term base; refuse absurd expansions.
                double projected = 1.0;
                for (int i = 0; i < e && projected <= 2e6; ++i)
                    projected *= static_cast<double>(base.term_count());
                if (projected > 2e6) {
                    pos_ = before;
                    fail("expansion too large (over 2e6 terms)");
                }
            }
            base = power(base, e);
        }
        return base;
    }

    int exponent() {
        skip_space();
        if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+'))
            fail("exponent must be a nonnegative integer");
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ == start) fail("expected integer exponent after '^'");
        if (pos_ < text_.size() && text_[pos_] == '.') fail("exponent must be an integer");
        int value = 0;
        auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
        if (ec != std::errc() || value > 4096) {
            pos_ = start;
            fail("exponent out of range");
        }
        return value;
    }

    static NcPolynomial power(const NcPolynomial& base, int n) {
        NcPolynomial acc = NcPolynomial::constant(1.0);
        for (int i = 0; i < n; ++i) acc = multiply(acc, base);
        return acc;
    }

    NcPolynomial primary() {
        char c = peek();
        if (c == '(') {
            ++pos_;
            NcPolynomial inner = expression();
            if (!consume(')')) fail("expected ')'");
            return inner;
        }
        if (c == 'x' || c == 'X') return variable();
        if (c == 'a' || c == 'A') return adj_call();
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        fail(pos_ >= text_.size() ? "unexpected end of input" : "expected a factor");
    }

    NcPolynomial variable() {
        std::size_t var_pos = pos_;
        ++pos_;  // the X
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ == start) {
            pos_ = var_pos;
            fail("expected generator index after 'X'");
        }
        long index = 0;
        std::from_chars(text_.data() + start, text_.data() + pos_, index);
        if (index < 1 || index > 255) {
            pos_ = var_pos;
            fail("generator index out of range (must be in 1..255)");
        }
        return NcPolynomial::generator(static_cast<Letter>(index));
    }

    NcPolynomial adj_call() {
        std::size_t kw_pos = pos_;
        static constexpr std::string_view kw = "adj";
        for (char k : kw) {
            if (pos_ >= text_.size() ||
                std::tolower(static_cast<unsigned char>(text_[pos_])) != k) {
                pos_ = kw_pos;
                fail("expected a factor");
            }
            ++pos_;
        }
        if (!consume('(')) fail("expected '(' after adj");
        NcPolynomial inner = expression();
        if (!consume(')')) fail("expected ')'");
        return adjoint(inner);
    }

    NcPolynomial number() {
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t mark = pos_++;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
            std::size_t digits = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            if (pos_ == digits) pos_ = mark;  // not an exponent suffix after all
        }
        if (pos_ == start || (text_[start] == '.' && pos_ == start + 1)) fail("malformed number");
        std::string lit(text_.substr(start, pos_ - start));
        char* end = nullptr;
        double value = std::strtod(lit.c_str(), &end);
        if (end != lit.c_str() + lit.size()) {
            pos_ = start;
            fail("malformed number");
        }
        return NcPolynomial::constant(value);
    }
};

// Shortest decimal form that round-trips to the same double.
std::string round_trip_decimal(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

}  // namespace

NcPolynomial parse(std::string_view text) { return Parser(text).run(); }

std::string format(const NcPolynomial& p) {
    if (p.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [w, c] : p.terms()) {
        const double mag = std::abs(c);
        if (first) {
            if (c < 0) out += '-';
            first = false;
        } else {
            out += (c < 0) ? " - " : " + ";
        }
        if (w.empty()) {
            out += round_trip_decimal(mag);
        } else if (mag == 1.0) {
            out += to_string(w);
        } else {
            out += round_trip_decimal(mag);
            out += '*';
            out += to_string(w);
        }
    }
    return out;
}

}  // namespace qgauss
