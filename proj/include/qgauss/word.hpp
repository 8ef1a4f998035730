#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace qgauss {

/// Generator index, 1-based. Index 0 is reserved (invalid).
using Letter = std::uint8_t;

/// A finite sequence of generator indices. Words are the monomial basis of
/// the free algebra and label the tensor basis of each Fock level; the empty
/// word is the multiplicative identity (and the vacuum label).
class Word {
public:
    Word() = default;
    explicit Word(std::vector<Letter> letters) : letters_(std::move(letters)) {}
    Word(std::initializer_list<int> letters) {
        letters_.reserve(letters.size());
        for (int l : letters) letters_.push_back(static_cast<Letter>(l));
    }

    std::size_t size() const { return letters_.size(); }
    bool empty() const { return letters_.empty(); }
    Letter operator[](std::size_t i) const { return letters_[i]; }
    const std::vector<Letter>& letters() const { return letters_; }

    Letter max_letter() const {
        Letter m = 0;
        for (Letter l : letters_)
            if (l > m) m = l;
        return m;
    }

    Word reversed() const {
        return Word(std::vector<Letter>(letters_.rbegin(), letters_.rend()));
    }

    /// Concatenation: this followed by other.
    Word concat(const Word& other) const {
        std::vector<Letter> out;
        out.reserve(letters_.size() + other.letters_.size());
        out.insert(out.end(), letters_.begin(), letters_.end());
        out.insert(out.end(), other.letters_.begin(), other.letters_.end());
        return Word(std::move(out));
    }

    Word with_prefix(Letter i) const {
        std::vector<Letter> out;
        out.reserve(letters_.size() + 1);
        out.push_back(i);
        out.insert(out.end(), letters_.begin(), letters_.end());
        return Word(std::move(out));
    }

    /// Copy with position j (0-based) removed.
    Word without_position(std::size_t j) const {
        std::vector<Letter> out;
        out.reserve(letters_.size() - 1);
        for (std::size_t t = 0; t < letters_.size(); ++t)
            if (t != j) out.push_back(letters_[t]);
        return Word(std::move(out));
    }

    /// Letter multiset as a sorted word; words with distinct types are
    /// orthogonal in the q-inner product.
    std::vector<Letter> letter_type() const;

    bool operator==(const Word&) const = default;

    /// Canonical order: by length, then lexicographic.
    std::strong_ordering operator<=>(const Word& other) const {
        if (letters_.size() != other.letters_.size())
            return letters_.size() <=> other.letters_.size();
        for (std::size_t i = 0; i < letters_.size(); ++i)
            if (letters_[i] != other.letters_[i]) return letters_[i] <=> other.letters_[i];
        return std::strong_ordering::equal;
    }

private:
    std::vector<Letter> letters_;
};

struct WordHash {
    std::size_t operator()(const Word& w) const {
        // FNV-1a over the letter bytes.
        std::size_t h = 1469598103934665603ull;
        for (Letter l : w.letters()) {
            h ^= static_cast<std::size_t>(l);
            h *= 1099511628211ull;
        }
        return h;
    }
};

/// "X2*X1" style rendering; the empty word renders as "1".
std::string to_string(const Word& w);

}  // namespace qgauss
