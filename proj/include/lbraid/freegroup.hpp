#pragma once

// Words in a free group F_S on a finite generating set, the group ring
// R[F_S], and the expansion of group-ring elements into monomials
// (s_1 - 1)...(s_k - 1) in positive generators.

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lbraid/coeff.hpp"
#include "lbraid/error.hpp"

namespace lbraid {

class GenSet {
public:
    GenSet() = default;

    explicit GenSet(std::vector<std::string> names) : names_(std::move(names))
    {
        if (names_.empty())
            throw Error("syntax", "generating set must be nonempty");
        for (std::size_t i = 0; i < names_.size(); ++i) {
            if (!valid_identifier(names_[i]))
                throw Error("syntax", "invalid generator name '" + names_[i] + "'");
            for (std::size_t j = 0; j < i; ++j)
                if (names_[j] == names_[i])
                    throw Error("syntax", "duplicate generator '" + names_[i] + "'");
        }
    }

    static bool valid_identifier(std::string_view s)
    {
        if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0])))
            return false;
        return std::all_of(s.begin(), s.end(),
                           [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
    }

    std::size_t size() const noexcept { return names_.size(); }
    const std::vector<std::string>& names() const noexcept { return names_; }
    const std::string& name(std::size_t i) const { return names_.at(i); }

    std::optional<int> index_of(std::string_view name) const
    {
        for (std::size_t i = 0; i < names_.size(); ++i)
            if (names_[i] == name)
                return static_cast<int>(i);
        return std::nullopt;
    }

    friend bool operator==(const GenSet&, const GenSet&) = default;

private:
    std::vector<std::string> names_;
};

struct Letter {
    int gen = 0;
    int sign = 1; // +1 or -1

    Letter inverse() const { return {gen, -sign}; }
    friend auto operator<=>(const Letter&, const Letter&) = default;
};

// A freely reduced word; reduction happens on construction, so two spellings
// of one group element always produce equal values.
class Word {
public:
    Word() = default;

    explicit Word(const std::vector<Letter>& letters)
    {
        letters_.reserve(letters.size());
        for (const auto& l : letters)
            push(l);
    }

    static Word generator(int gen, int sign = 1) { return Word(std::vector<Letter>{{gen, sign}}); }

    const std::vector<Letter>& letters() const noexcept { return letters_; }
    std::size_t size() const noexcept { return letters_.size(); }
    bool is_identity() const noexcept { return letters_.empty(); }

    Word inverse() const
    {
        Word w;
        w.letters_.reserve(letters_.size());
        for (auto it = letters_.rbegin(); it != letters_.rend(); ++it)
            w.letters_.push_back(it->inverse());
        return w;
    }

    friend Word operator*(const Word& a, const Word& b)
    {
        Word w = a;
        for (const auto& l : b.letters_)
            w.push(l);
        return w;
    }

    Word& operator*=(const Word& b)
    {
        for (const auto& l : b.letters_)
            push(l);
        return *this;
    }

    // shortlex: length first, then lexicographic on (gen, sign)
    friend std::strong_ordering operator<=>(const Word& a, const Word& b)
    {
        if (a.size() != b.size())
            return a.size() <=> b.size();
        return std::lexicographical_compare_three_way(a.letters_.begin(), a.letters_.end(), b.letters_.begin(),
                                                      b.letters_.end());
    }
    friend bool operator==(const Word&, const Word&) = default;

private:
    void push(const Letter& l)
    {
        if (!letters_.empty() && letters_.back().gen == l.gen && letters_.back().sign == -l.sign)
            letters_.pop_back();
        else
            letters_.push_back(l);
    }

    std::vector<Letter> letters_;
};

// Tokens: `g`, `g^-1`, `g^k` (k nonzero), whitespace separated.
inline Word parse_word(std::string_view text, const GenSet& gens)
{
    std::vector<Letter> letters;
    std::istringstream in{std::string(text)};
    std::string tok;
    while (in >> tok) {
        std::string name = tok;
        long long power = 1;
        auto caret = tok.find('^');
        if (caret != std::string::npos) {
            name = tok.substr(0, caret);
            std::string exp = tok.substr(caret + 1);
            std::size_t start = (!exp.empty() && (exp[0] == '-' || exp[0] == '+')) ? 1 : 0;
            if (exp.size() <= start || exp.size() > 12 ||
                !std::all_of(exp.begin() + static_cast<std::ptrdiff_t>(start), exp.end(),
                             [](char c) { return c >= '0' && c <= '9'; }))
                throw Error("syntax", "malformed exponent in token '" + tok + "'");
            power = std::stoll(exp);
            if (power == 0)
                throw Error("syntax", "zero exponent in token '" + tok + "'");
        }
        if (!GenSet::valid_identifier(name))
            throw Error("syntax", "malformed token '" + tok + "'");
        auto idx = gens.index_of(name);
        if (!idx)
            throw Error("unknown_generator", "'" + name + "' is not a generator");
        int sign = power > 0 ? 1 : -1;
        for (long long k = 0; k < (power > 0 ? power : -power); ++k)
            letters.push_back({*idx, sign});
    }
    return Word(letters);
}

// Inverse of parse_word; runs of one letter are written with exponents.
inline std::string format_word(const Word& w, const GenSet& gens)
{
    std::string out;
    const auto& ls = w.letters();
    for (std::size_t i = 0; i < ls.size();) {
        std::size_t j = i;
        while (j < ls.size() && ls[j] == ls[i])
            ++j;
        long long power = static_cast<long long>(j - i) * ls[i].sign;
        if (!out.empty())
            out += ' ';
        out += gens.name(static_cast<std::size_t>(ls[i].gen));
        if (power != 1)
            out += "^" + std::to_string(power);
        i = j;
    }
    return out;
}

inline Word conjugate(const Word& g, const Word& w) { return g * w * g.inverse(); }

inline Word commutator(const Word& a, const Word& b) { return a * b * a.inverse() * b.inverse(); }

class GroupRingElement {
public:
    explicit GroupRingElement(Ring ring = Ring::integers()) : ring_(std::move(ring)) {}

    static GroupRingElement of_word(const Ring& ring, const Word& w, const Scalar& c = Scalar(1))
    {
        GroupRingElement x(ring);
        x.add_term(w, c);
        return x;
    }

    static GroupRingElement one(const Ring& ring) { return of_word(ring, Word()); }

    // g - 1
    static GroupRingElement difference(const Ring& ring, const Word& g)
    {
        GroupRingElement x = of_word(ring, g);
        x.add_term(Word(), Scalar(-1));
        return x;
    }

    const Ring& ring() const noexcept { return ring_; }
    const std::map<Word, Scalar>& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }

    void add_term(const Word& w, const Scalar& c)
    {
        Scalar v = ring_.normalize(c);
        if (v == 0)
            return;
        auto it = terms_.find(w);
        if (it == terms_.end()) {
            terms_.emplace(w, v);
            return;
        }
        it->second = ring_.add(it->second, v);
        if (it->second == 0)
            terms_.erase(it);
    }

    Scalar coefficient(const Word& w) const
    {
        auto it = terms_.find(w);
        return it == terms_.end() ? Scalar(0) : it->second;
    }

    GroupRingElement& operator+=(const GroupRingElement& o)
    {
        require_same_ring(ring_, o.ring_);
        for (const auto& [w, c] : o.terms_)
            add_term(w, c);
        return *this;
    }
    GroupRingElement& operator-=(const GroupRingElement& o)
    {
        require_same_ring(ring_, o.ring_);
        for (const auto& [w, c] : o.terms_)
            add_term(w, -c);
        return *this;
    }
    friend GroupRingElement operator+(GroupRingElement a, const GroupRingElement& b) { return a += b; }
    friend GroupRingElement operator-(GroupRingElement a, const GroupRingElement& b) { return a -= b; }

    friend GroupRingElement operator*(const GroupRingElement& a, const GroupRingElement& b)
    {
        require_same_ring(a.ring_, b.ring_);
        GroupRingElement p(a.ring_);
        for (const auto& [u, cu] : a.terms_)
            for (const auto& [v, cv] : b.terms_)
                p.add_term(u * v, cu * cv);
        return p;
    }

    GroupRingElement scaled(const Scalar& c) const
    {
        GroupRingElement p(ring_);
        for (const auto& [w, cw] : terms_)
            p.add_term(w, cw * c);
        return p;
    }

    friend bool operator==(const GroupRingElement& a, const GroupRingElement& b)
    {
        return a.ring_ == b.ring_ && a.terms_ == b.terms_;
    }

private:
    Ring ring_;
    std::map<Word, Scalar> terms_;
};

// Sum of coefficients.
inline Scalar augmentation(const GroupRingElement& x)
{
    Scalar s = 0;
    for (const auto& [w, c] : x.terms())
        s = x.ring().add(s, c);
    return s;
}

// A sequence of positive generators (i_1, ..., i_k), standing for the
// monomial (s_{i_1} - 1)...(s_{i_k} - 1).
using Monomial = std::vector<int>;

struct ShortLex {
    bool operator()(const std::vector<int>& a, const std::vector<int>& b) const
    {
        if (a.size() != b.size())
            return a.size() < b.size();
        return a < b;
    }
};

struct MonomialCombination {
    Ring ring = Ring::integers();
    int max_degree = 0;
    // true when terms of degree > max_degree were discarded, i.e. equality
    // with the expanded element holds only modulo I^{max_degree+1}
    bool truncated = false;
    std::map<Monomial, Scalar, ShortLex> terms;

    void add_term(const Monomial& m, const Scalar& c)
    {
        Scalar v = ring.normalize(c);
        if (v == 0)
            return;
        auto [it, fresh] = terms.emplace(m, v);
        if (fresh)
            return;
        it->second = ring.add(it->second, v);
        if (it->second == 0)
            terms.erase(it);
    }
};

namespace detail {

// p*q + p + q truncated at degree n; inputs have no constant term
inline MonomialCombination fox_combine(const MonomialCombination& p, const MonomialCombination& q)
{
    MonomialCombination r{p.ring, p.max_degree, p.truncated || q.truncated, {}};
    for (const auto& [a, ca] : p.terms)
        r.add_term(a, ca);
    for (const auto& [b, cb] : q.terms)
        r.add_term(b, cb);
    for (const auto& [a, ca] : p.terms)
        for (const auto& [b, cb] : q.terms) {
            if (static_cast<int>(a.size() + b.size()) > p.max_degree) {
                r.truncated = true;
                continue;
            }
            Monomial ab = a;
            ab.insert(ab.end(), b.begin(), b.end());
            r.add_term(ab, ca * cb);
        }
    return r;
}

inline MonomialCombination fox_letter(const Ring& ring, const Letter& l, int n)
{
    MonomialCombination r{ring, n, false, {}};
    if (l.sign > 0) {
        r.add_term(Monomial{l.gen}, Scalar(1));
        return r;
    }
    // s^{-1} - 1 = sum_{k>=1} (-1)^k (s-1)^k
    for (int k = 1; k <= n; ++k)
        r.add_term(Monomial(static_cast<std::size_t>(k), l.gen), Scalar(k % 2 ? -1 : 1));
    r.truncated = true;
    return r;
}

} // namespace detail

// Monomials c with sum c_m (s_{m_1}-1)...(s_{m_k}-1) = w - 1 mod I^{n+1}.
inline MonomialCombination fox_expand(const Word& w, const Ring& ring, int n)
{
    if (n < 1)
        throw Error("domain", "fox_expand needs n >= 1");
    MonomialCombination acc{ring, n, false, {}};
    for (const auto& l : w.letters()) {
        // (uv - 1) = (u-1)(v-1) + (u-1) + (v-1)
        acc = detail::fox_combine(acc, detail::fox_letter(ring, l, n));
    }
    return acc;
}

// Expansion of x - augmentation(x) * 1.
inline MonomialCombination fox_expand(const GroupRingElement& x, int n)
{
    if (n < 1)
        throw Error("domain", "fox_expand needs n >= 1");
    MonomialCombination out{x.ring(), n, false, {}};
    for (const auto& [w, c] : x.terms()) {
        auto e = fox_expand(w, x.ring(), n);
        out.truncated = out.truncated || e.truncated;
        for (const auto& [m, cm] : e.terms)
            out.add_term(m, cm * c);
    }
    return out;
}

// (s_{m_1} - 1)...(s_{m_k} - 1) multiplied out in R[F_S].
inline GroupRingElement expand_monomial(const Ring& ring, const Monomial& m)
{
    GroupRingElement p = GroupRingElement::one(ring);
    for (int g : m)
        p = p * GroupRingElement::difference(ring, Word::generator(g));
    return p;
}

inline GroupRingElement expand_combination(const MonomialCombination& c)
{
    GroupRingElement p(c.ring);
    for (const auto& [m, cm] : c.terms)
        p += expand_monomial(c.ring, m).scaled(cm);
    return p;
}

struct Presentation {
    GenSet gens;
    std::vector<Word> relators;
    std::vector<std::string> warnings;
};

// Line format: `gens: a b c` once, then `rel: <word>` lines. Blank lines and
// lines starting with '#' are skipped. `source` names the input in messages.
inline Presentation parse_presentation(std::string_view text, const std::string& source = "<input>")
{
    Presentation p;
    bool have_gens = false;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    std::vector<std::pair<int, std::string>> rels;
    auto where = [&](int ln) { return source + ":" + std::to_string(ln) + ": "; };
    while (std::getline(in, line)) {
        ++lineno;
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#')
            continue;
        line = line.substr(first);
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
            line.pop_back();
        if (line.rfind("gens:", 0) == 0) {
            if (have_gens)
                throw Error("syntax", where(lineno) + "duplicate gens line");
            std::istringstream names(line.substr(5));
            std::vector<std::string> ns;
            std::string tok;
            while (names >> tok)
                ns.push_back(tok);
            try {
                p.gens = GenSet(std::move(ns));
            } catch (const Error& e) {
                throw Error(e.code(), where(lineno) + e.message());
            }
            have_gens = true;
        } else if (line.rfind("rel:", 0) == 0) {
            rels.emplace_back(lineno, line.substr(4));
        } else {
            throw Error("syntax", where(lineno) + "expected 'gens:' or 'rel:'");
        }
    }
    if (!have_gens)
        throw Error("syntax", source + ": missing 'gens:' line");
    for (const auto& [ln, body] : rels) {
        Word w;
        try {
            w = parse_word(body, p.gens);
        } catch (const Error& e) {
            throw Error(e.code(), where(ln) + e.message());
        }
        if (w.is_identity()) {
            p.warnings.push_back(where(ln) + "trivial relator dropped");
            continue;
        }
        p.relators.push_back(std::move(w));
    }
    return p;
}

inline std::string format_presentation(const Presentation& p)
{
    std::string out = "gens:";
    for (const auto& n : p.gens.names())
        out += " " + n;
    out += "\n";
    for (const auto& r : p.relators)
        out += "rel: " + format_word(r, p.gens) + "\n";
    return out;
}

// All reduced words of length <= max_len in shortlex order.
inline std::vector<Word> enumerate_words(std::size_t num_gens, std::size_t max_len)
{
    std::vector<Word> out{Word()};
    std::size_t begin = 0;
    for (std::size_t len = 1; len <= max_len; ++len) {
        std::size_t end = out.size();
        for (std::size_t i = begin; i < end; ++i) {
            for (int g = 0; g < static_cast<int>(num_gens); ++g)
                for (int sign : {1, -1}) {
                    const auto& ls = out[i].letters();
                    if (!ls.empty() && ls.back().gen == g && ls.back().sign == -sign)
                        continue;
                    auto next = ls;
                    next.push_back({g, sign});
                    out.emplace_back(next);
                }
        }
        begin = end;
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace lbraid
