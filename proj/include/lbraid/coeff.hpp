#pragma once

// Exact linear algebra over the coefficient rings Z, Z/m and Q.
//
// All matrix reductions funnel through one integer Smith normal form:
//   * Z    : directly.
//   * Z/m  : on canonical lifts to Z; the diagonal is then rescaled by units
//            so that every entry is a divisor of m (or 0).
//   * Q    : rows are cleared of denominators first, then the nonzero
//            diagonal entries are scaled to 1.
// Pivot rule: smallest absolute value among the remaining entries, ties
// broken by row-major position. With a fixed rule the output is a pure
// function of the input.

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/miller_rabin.hpp>

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stop_token>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lbraid/error.hpp"

namespace lbraid {

using BigInt = boost::multiprecision::cpp_int;
using Scalar = boost::multiprecision::cpp_rational;

namespace detail {

inline BigInt floor_mod(const BigInt& a, const BigInt& m)
{
    BigInt r = a % m;
    if (r < 0)
        r += m;
    return r;
}

inline BigInt floor_div(const BigInt& a, const BigInt& b)
{
    BigInt q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0)))
        --q;
    return q;
}

inline BigInt abs_int(const BigInt& a) { return a < 0 ? BigInt(-a) : a; }

// Extended gcd: returns g = gcd(a, b) >= 0 with s*a + t*b = g.
inline BigInt ext_gcd(const BigInt& a, const BigInt& b, BigInt& s, BigInt& t)
{
    BigInt r0 = a, r1 = b, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
    while (r1 != 0) {
        BigInt q = r0 / r1;
        BigInt tmp = r0 - q * r1;
        r0 = r1;
        r1 = tmp;
        tmp = s0 - q * s1;
        s0 = s1;
        s1 = tmp;
        tmp = t0 - q * t1;
        t0 = t1;
        t1 = tmp;
    }
    if (r0 < 0) {
        r0 = -r0;
        s0 = -s0;
        t0 = -t0;
    }
    s = s0;
    t = t0;
    return r0;
}

inline void check_stop(const std::stop_token& stop)
{
    if (stop.stop_requested())
        throw Error("interrupted", "computation cancelled by caller");
}

} // namespace detail

class Ring {
public:
    enum class Kind { Integers, IntegersMod, Rationals };

    Ring() = default;

    static Ring integers() { return Ring(Kind::Integers, 0); }
    static Ring rationals() { return Ring(Kind::Rationals, 0); }
    static Ring integers_mod(const BigInt& m)
    {
        if (m < 2)
            throw Error("ring", "modulus must be at least 2");
        return Ring(Kind::IntegersMod, m);
    }

    // Accepts "Z", "Q" and "Z/m".
    static Ring parse(std::string_view text)
    {
        if (text == "Z")
            return integers();
        if (text == "Q")
            return rationals();
        if (text.size() > 2 && text.substr(0, 2) == "Z/") {
            std::string digits(text.substr(2));
            if (digits.empty() ||
                !std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; }))
                throw Error("ring", "malformed ring '" + std::string(text) + "'");
            return integers_mod(BigInt(digits));
        }
        throw Error("ring", "unknown ring '" + std::string(text) + "' (expected Z, Z/m or Q)");
    }

    Kind kind() const noexcept { return kind_; }
    const BigInt& modulus() const noexcept { return modulus_; }
    bool is_modular() const noexcept { return kind_ == Kind::IntegersMod; }

    // Q, or Z/p with p prime.
    bool is_field() const
    {
        if (kind_ == Kind::Rationals)
            return true;
        if (kind_ == Kind::IntegersMod)
            return is_prime_modulus();
        return false;
    }

    bool is_prime_modulus() const
    {
        if (kind_ != Kind::IntegersMod)
            return false;
        return boost::multiprecision::miller_rabin_test(modulus_, 25);
    }

    std::string name() const
    {
        switch (kind_) {
        case Kind::Integers:
            return "Z";
        case Kind::Rationals:
            return "Q";
        case Kind::IntegersMod:
            return "Z/" + modulus_.str();
        }
        return "?";
    }

    // Maps an arbitrary rational into canonical form for this ring.
    Scalar normalize(const Scalar& x) const
    {
        using boost::multiprecision::denominator;
        using boost::multiprecision::numerator;
        switch (kind_) {
        case Kind::Rationals:
            return x;
        case Kind::Integers:
            if (denominator(x) != 1)
                throw Error("not_in_ring", x.str() + " is not an integer");
            return x;
        case Kind::IntegersMod: {
            BigInt num = detail::floor_mod(numerator(x), modulus_);
            BigInt den = detail::floor_mod(denominator(x), modulus_);
            if (den != 1) {
                BigInt s, t;
                BigInt g = detail::ext_gcd(den, modulus_, s, t);
                if (g != 1)
                    throw Error("not_in_ring", x.str() + " has a denominator that is not a unit in " + name());
                num = detail::floor_mod(num * s, modulus_);
            }
            return Scalar(num);
        }
        }
        return x;
    }

    Scalar from_int(const BigInt& v) const { return normalize(Scalar(v)); }
    Scalar zero() const { return Scalar(0); }
    Scalar one() const { return Scalar(1); }

    Scalar add(const Scalar& a, const Scalar& b) const { return reduce(a + b); }
    Scalar sub(const Scalar& a, const Scalar& b) const { return reduce(a - b); }
    Scalar mul(const Scalar& a, const Scalar& b) const { return reduce(a * b); }
    Scalar neg(const Scalar& a) const { return reduce(-a); }

    bool is_unit(const Scalar& a) const
    {
        switch (kind_) {
        case Kind::Rationals:
            return a != 0;
        case Kind::Integers:
            return a == 1 || a == -1;
        case Kind::IntegersMod: {
            BigInt s, t;
            return detail::ext_gcd(boost::multiprecision::numerator(a), modulus_, s, t) == 1;
        }
        }
        return false;
    }

    Scalar inverse(const Scalar& a) const
    {
        if (!is_unit(a))
            throw Error("not_invertible", a.str() + " is not a unit in " + name());
        return normalize(Scalar(1) / a);
    }

    std::string format(const Scalar& a) const { return a.str(); }

    // Decimal integers, plus "p/q" over Q or where q is a unit mod m.
    Scalar parse_element(std::string_view text) const
    {
        std::string s(text);
        auto valid_int = [](const std::string& t) {
            std::size_t i = (!t.empty() && (t[0] == '-' || t[0] == '+')) ? 1 : 0;
            if (i >= t.size())
                return false;
            return std::all_of(t.begin() + static_cast<std::ptrdiff_t>(i), t.end(),
                               [](char c) { return c >= '0' && c <= '9'; });
        };
        auto strip_plus = [](std::string t) {
            if (!t.empty() && t[0] == '+')
                t.erase(0, 1);
            return t;
        };
        auto slash = s.find('/');
        if (slash == std::string::npos) {
            if (!valid_int(s))
                throw Error("syntax", "malformed coefficient '" + s + "'");
            return normalize(Scalar(BigInt(strip_plus(s))));
        }
        std::string num = s.substr(0, slash), den = s.substr(slash + 1);
        if (!valid_int(num) || !valid_int(den) || den[0] == '-' || den[0] == '+')
            throw Error("syntax", "malformed coefficient '" + s + "'");
        BigInt d(den);
        if (d == 0)
            throw Error("syntax", "zero denominator in '" + s + "'");
        return normalize(Scalar(BigInt(strip_plus(num)), d));
    }

    friend bool operator==(const Ring& a, const Ring& b)
    {
        return a.kind_ == b.kind_ && a.modulus_ == b.modulus_;
    }

private:
    Ring(Kind kind, BigInt modulus) : kind_(kind), modulus_(std::move(modulus)) {}

    Scalar reduce(const Scalar& x) const
    {
        if (kind_ == Kind::IntegersMod)
            return Scalar(detail::floor_mod(boost::multiprecision::numerator(x), modulus_));
        return x;
    }

    Kind kind_ = Kind::Integers;
    BigInt modulus_ = 0;
};

inline void require_same_ring(const Ring& a, const Ring& b)
{
    if (!(a == b))
        throw Error("ring_mismatch", "operands live over " + a.name() + " and " + b.name());
}

class IntMatrix {
public:
    IntMatrix() = default;

    IntMatrix(Ring ring, std::size_t rows, std::size_t cols)
        : ring_(std::move(ring)), rows_(rows), cols_(cols), entries_(rows * cols, Scalar(0))
    {
    }

    IntMatrix(Ring ring, std::size_t rows, std::size_t cols, std::vector<Scalar> entries)
        : ring_(std::move(ring)), rows_(rows), cols_(cols), entries_(std::move(entries))
    {
        if (entries_.size() != rows_ * cols_)
            throw Error("shape", "expected " + std::to_string(rows_ * cols_) + " entries, got " +
                                     std::to_string(entries_.size()));
        for (auto& e : entries_)
            e = ring_.normalize(e);
    }

    static IntMatrix identity(const Ring& ring, std::size_t n)
    {
        IntMatrix m(ring, n, n);
        for (std::size_t i = 0; i < n; ++i)
            m.entries_[i * n + i] = 1;
        return m;
    }

    // Builds a matrix whose columns are the given vectors (all of length rows).
    static IntMatrix from_columns(const Ring& ring, std::size_t rows, const std::vector<std::vector<Scalar>>& cols)
    {
        IntMatrix m(ring, rows, cols.size());
        for (std::size_t j = 0; j < cols.size(); ++j) {
            if (cols[j].size() != rows)
                throw Error("shape", "column " + std::to_string(j) + " has wrong length");
            for (std::size_t i = 0; i < rows; ++i)
                m.set(i, j, cols[j][i]);
        }
        return m;
    }

    const Ring& ring() const noexcept { return ring_; }
    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    const std::vector<Scalar>& entries() const noexcept { return entries_; }

    const Scalar& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

    void set(std::size_t r, std::size_t c, const Scalar& v) { entries_[r * cols_ + c] = ring_.normalize(v); }
    void add_to(std::size_t r, std::size_t c, const Scalar& v)
    {
        auto& e = entries_[r * cols_ + c];
        e = ring_.add(e, ring_.normalize(v));
    }

    std::vector<Scalar> column(std::size_t c) const
    {
        std::vector<Scalar> out(rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            out[r] = (*this)(r, c);
        return out;
    }

    std::vector<Scalar> row(std::size_t r) const
    {
        return {entries_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                entries_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_)};
    }

    IntMatrix transpose() const
    {
        IntMatrix t(ring_, cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c)
                t.entries_[c * rows_ + r] = (*this)(r, c);
        return t;
    }

    // Rows [r0, r1) and columns [c0, c1).
    IntMatrix block(std::size_t r0, std::size_t r1, std::size_t c0, std::size_t c1) const
    {
        IntMatrix b(ring_, r1 - r0, c1 - c0);
        for (std::size_t r = r0; r < r1; ++r)
            for (std::size_t c = c0; c < c1; ++c)
                b.entries_[(r - r0) * b.cols_ + (c - c0)] = (*this)(r, c);
        return b;
    }

    // Stacks rows of `below` under this matrix.
    IntMatrix stacked(const IntMatrix& below) const
    {
        require_same_ring(ring_, below.ring_);
        if (below.cols_ != cols_)
            throw Error("shape", "cannot stack matrices with different column counts");
        IntMatrix s(ring_, rows_ + below.rows_, cols_);
        std::copy(entries_.begin(), entries_.end(), s.entries_.begin());
        std::copy(below.entries_.begin(), below.entries_.end(),
                  s.entries_.begin() + static_cast<std::ptrdiff_t>(entries_.size()));
        return s;
    }

    bool is_zero() const
    {
        return std::all_of(entries_.begin(), entries_.end(), [](const Scalar& e) { return e == 0; });
    }

    std::vector<Scalar> apply(const std::vector<Scalar>& x) const
    {
        if (x.size() != cols_)
            throw Error("shape", "vector length does not match column count");
        std::vector<Scalar> y(rows_, Scalar(0));
        for (std::size_t r = 0; r < rows_; ++r) {
            Scalar acc = 0;
            for (std::size_t c = 0; c < cols_; ++c)
                if ((*this)(r, c) != 0 && x[c] != 0)
                    acc += (*this)(r, c) * x[c];
            y[r] = ring_.normalize(acc);
        }
        return y;
    }

    friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b)
    {
        require_same_ring(a.ring_, b.ring_);
        if (a.cols_ != b.rows_)
            throw Error("shape", "cannot multiply " + std::to_string(a.rows_) + "x" + std::to_string(a.cols_) +
                                     " by " + std::to_string(b.rows_) + "x" + std::to_string(b.cols_));
        IntMatrix p(a.ring_, a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const Scalar& aik = a(i, k);
                if (aik == 0)
                    continue;
                for (std::size_t j = 0; j < b.cols_; ++j)
                    if (b(k, j) != 0)
                        p.entries_[i * p.cols_ + j] += aik * b(k, j);
            }
        for (auto& e : p.entries_)
            e = p.ring_.normalize(e);
        return p;
    }

    friend bool operator==(const IntMatrix& a, const IntMatrix& b)
    {
        return a.ring_ == b.ring_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_;
    }

private:
    Ring ring_ = Ring::integers();
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Scalar> entries_;
};

namespace detail {

struct DenseInt {
    std::size_t rows = 0, cols = 0;
    std::vector<BigInt> a;

    DenseInt() = default;
    DenseInt(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, BigInt(0)) {}

    static DenseInt identity(std::size_t n)
    {
        DenseInt m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            m.at(i, i) = 1;
        return m;
    }

    BigInt& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    const BigInt& at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

    void swap_rows(std::size_t i, std::size_t k)
    {
        if (i == k)
            return;
        for (std::size_t j = 0; j < cols; ++j)
            std::swap(at(i, j), at(k, j));
    }
    void swap_cols(std::size_t j, std::size_t k)
    {
        if (j == k)
            return;
        for (std::size_t i = 0; i < rows; ++i)
            std::swap(at(i, j), at(i, k));
    }
    // row dst -= q * row src
    void row_sub(std::size_t dst, std::size_t src, const BigInt& q)
    {
        for (std::size_t j = 0; j < cols; ++j)
            if (at(src, j) != 0)
                at(dst, j) -= q * at(src, j);
    }
    // col dst -= q * col src
    void col_sub(std::size_t dst, std::size_t src, const BigInt& q)
    {
        for (std::size_t i = 0; i < rows; ++i)
            if (at(i, src) != 0)
                at(i, dst) -= q * at(i, src);
    }
    void negate_row(std::size_t i)
    {
        for (std::size_t j = 0; j < cols; ++j)
            at(i, j) = -at(i, j);
    }
};

inline DenseInt lift(const IntMatrix& m)
{
    DenseInt d(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            d.at(i, j) = boost::multiprecision::numerator(m(i, j));
    return d;
}

inline IntMatrix lower(const Ring& ring, const DenseInt& d)
{
    std::vector<Scalar> e(d.a.size());
    for (std::size_t i = 0; i < d.a.size(); ++i)
        e[i] = Scalar(d.a[i]);
    return IntMatrix(ring, d.rows, d.cols, std::move(e));
}

struct IntSmith {
    DenseInt u, d, v;
    std::size_t rank = 0;
};

// U * M * V = D over Z with D diagonal, d_1 | d_2 | ..., all d_i >= 0.
inline IntSmith int_smith(DenseInt m, bool want_u, bool want_v, const std::stop_token& stop)
{
    const std::size_t r = m.rows, c = m.cols;
    IntSmith out;
    out.u = want_u ? DenseInt::identity(r) : DenseInt(0, r);
    out.v = want_v ? DenseInt::identity(c) : DenseInt(c, 0);
    auto rswap = [&](std::size_t i, std::size_t k) {
        m.swap_rows(i, k);
        if (want_u)
            out.u.swap_rows(i, k);
    };
    auto cswap = [&](std::size_t j, std::size_t k) {
        m.swap_cols(j, k);
        if (want_v)
            out.v.swap_cols(j, k);
    };
    auto rsub = [&](std::size_t dst, std::size_t src, const BigInt& q) {
        m.row_sub(dst, src, q);
        if (want_u)
            out.u.row_sub(dst, src, q);
    };
    auto csub = [&](std::size_t dst, std::size_t src, const BigInt& q) {
        m.col_sub(dst, src, q);
        if (want_v)
            out.v.col_sub(dst, src, q);
    };

    std::size_t t = 0;
    for (; t < std::min(r, c); ++t) {
        check_stop(stop);
        // global pivot: smallest |entry|, row-major ties
        std::optional<std::pair<std::size_t, std::size_t>> piv;
        BigInt best;
        for (std::size_t i = t; i < r; ++i)
            for (std::size_t j = t; j < c; ++j) {
                const BigInt& e = m.at(i, j);
                if (e == 0)
                    continue;
                BigInt ae = abs_int(e);
                if (!piv || ae < best) {
                    best = ae;
                    piv = {i, j};
                    if (best == 1)
                        goto found;
                }
            }
    found:
        if (!piv)
            break;
        rswap(t, piv->first);
        cswap(t, piv->second);

        for (;;) {
            bool dirty = false;
            for (std::size_t i = t + 1; i < r; ++i)
                if (m.at(i, t) != 0) {
                    BigInt q = m.at(i, t) / m.at(t, t);
                    if (q != 0)
                        rsub(i, t, q);
                    if (m.at(i, t) != 0)
                        dirty = true;
                }
            for (std::size_t j = t + 1; j < c; ++j)
                if (m.at(t, j) != 0) {
                    BigInt q = m.at(t, j) / m.at(t, t);
                    if (q != 0)
                        csub(j, t, q);
                    if (m.at(t, j) != 0)
                        dirty = true;
                }
            if (dirty) {
                // a remainder is now smaller than the pivot: bring it in
                std::size_t bi = t, bj = t;
                BigInt b = abs_int(m.at(t, t));
                for (std::size_t i = t + 1; i < r; ++i)
                    if (m.at(i, t) != 0 && abs_int(m.at(i, t)) < b) {
                        b = abs_int(m.at(i, t));
                        bi = i;
                        bj = t;
                    }
                for (std::size_t j = t + 1; j < c; ++j)
                    if (m.at(t, j) != 0 && abs_int(m.at(t, j)) < b) {
                        b = abs_int(m.at(t, j));
                        bi = t;
                        bj = j;
                    }
                rswap(t, bi);
                cswap(t, bj);
                continue;
            }
            // row and column clear; enforce divisibility of the remaining block
            bool fixed = false;
            for (std::size_t i = t + 1; i < r && !fixed; ++i)
                for (std::size_t j = t + 1; j < c; ++j)
                    if (m.at(i, j) % m.at(t, t) != 0) {
                        rsub(t, i, BigInt(-1));
                        fixed = true;
                        break;
                    }
            if (!fixed)
                break;
        }
        if (m.at(t, t) < 0) {
            m.negate_row(t);
            if (want_u)
                out.u.negate_row(t);
        }
    }
    out.rank = t;
    out.d = std::move(m);
    return out;
}

} // namespace detail

struct SmithForm {
    IntMatrix U, D, V;
    // number of nonzero diagonal entries of D
    std::size_t rank = 0;
};

// U * M * V = D with U, V invertible over the ring and D diagonal with a
// divisibility chain. Over Z/m the diagonal entries are divisors of m (0 for
// m itself); over Q they are 0/1.
inline SmithForm smith_normal_form(const IntMatrix& M, const std::stop_token& stop = {})
{
    const Ring& ring = M.ring();
    if (M.entries().size() != M.rows() * M.cols())
        throw Error("shape", "entry count does not match dimensions");
    using Kind = Ring::Kind;
    SmithForm out;
    if (ring.kind() == Kind::Rationals) {
        // clear denominators row by row
        detail::DenseInt lifted(M.rows(), M.cols());
        std::vector<BigInt> scale(M.rows(), BigInt(1));
        for (std::size_t i = 0; i < M.rows(); ++i) {
            BigInt l = 1;
            for (std::size_t j = 0; j < M.cols(); ++j) {
                BigInt d = boost::multiprecision::denominator(M(i, j));
                l = l / boost::multiprecision::gcd(l, d) * d;
            }
            scale[i] = l;
            for (std::size_t j = 0; j < M.cols(); ++j) {
                Scalar v = M(i, j) * l;
                lifted.at(i, j) = boost::multiprecision::numerator(v);
            }
        }
        auto s = detail::int_smith(std::move(lifted), true, true, stop);
        IntMatrix U = detail::lower(ring, s.u);
        // U_Q = diag(1/d) * U_Z * diag(scale)
        IntMatrix Uq(ring, M.rows(), M.rows());
        for (std::size_t i = 0; i < M.rows(); ++i) {
            Scalar rowscale = (i < s.rank) ? Scalar(1) / Scalar(s.d.at(i, i)) : Scalar(1);
            for (std::size_t j = 0; j < M.rows(); ++j)
                Uq.set(i, j, rowscale * U(i, j) * Scalar(scale[j]));
        }
        IntMatrix D(ring, M.rows(), M.cols());
        for (std::size_t i = 0; i < s.rank; ++i)
            D.set(i, i, 1);
        out.U = std::move(Uq);
        out.D = std::move(D);
        out.V = detail::lower(ring, s.v);
        out.rank = s.rank;
        return out;
    }

    auto s = detail::int_smith(detail::lift(M), true, true, stop);
    if (ring.kind() == Kind::Integers) {
        out.U = detail::lower(ring, s.u);
        out.D = detail::lower(ring, s.d);
        out.V = detail::lower(ring, s.v);
        out.rank = s.rank;
        return out;
    }

    // Z/m: rescale each d_i to gcd(d_i, m) by a unit folded into U
    const BigInt& m = ring.modulus();
    std::size_t rank = 0;
    for (std::size_t i = 0; i < std::min(M.rows(), M.cols()); ++i) {
        BigInt di = detail::floor_mod(s.d.at(i, i), m);
        if (di == 0) {
            s.d.at(i, i) = 0;
            continue;
        }
        BigInt g = boost::multiprecision::gcd(di, m);
        BigInt k = di / g, step = m / g;
        BigInt unit = k;
        while (boost::multiprecision::gcd(unit, m) != 1)
            unit += step;
        BigInt a, b;
        detail::ext_gcd(unit, m, a, b);
        BigInt inv = detail::floor_mod(a, m);
        for (std::size_t j = 0; j < M.rows(); ++j)
            s.u.at(i, j) = detail::floor_mod(s.u.at(i, j) * inv, m);
        s.d.at(i, i) = g;
        ++rank;
    }
    out.U = detail::lower(ring, s.u);
    out.D = detail::lower(ring, s.d);
    out.V = detail::lower(ring, s.v);
    out.rank = rank;
    return out;
}

inline std::size_t rank(const IntMatrix& M, const std::stop_token& stop = {})
{
    return smith_normal_form(M, stop).rank;
}

// Columns of `generators` generate {x : M x = 0}. Over Z and Q they form a
// (saturated) basis. Over Z/m the kernel is a direct sum of cyclic modules
// and each generator comes with the generator of its annihilator ideal;
// annihilator 0 marks a free generator.
struct KernelBasis {
    IntMatrix generators;
    std::vector<BigInt> annihilators;

    std::size_t size() const noexcept { return generators.cols(); }
};

inline KernelBasis kernel_basis(const IntMatrix& M, const std::stop_token& stop = {})
{
    const Ring& ring = M.ring();
    const std::size_t c = M.cols();
    if (ring.kind() != Ring::Kind::IntegersMod) {
        auto snf = smith_normal_form(M, stop);
        std::vector<std::vector<Scalar>> cols;
        for (std::size_t j = snf.rank; j < c; ++j)
            cols.push_back(snf.V.column(j));
        return {IntMatrix::from_columns(ring, c, cols), std::vector<BigInt>(cols.size(), BigInt(0))};
    }
    // Z/m: M x = 0 iff D V^{-1} x = 0 mod m, solved coordinatewise
    auto s = detail::int_smith(detail::lift(M), false, true, stop);
    const BigInt& m = ring.modulus();
    std::vector<std::vector<Scalar>> cols;
    std::vector<BigInt> ann;
    for (std::size_t j = 0; j < c; ++j) {
        BigInt dj = (j < std::min(M.rows(), c)) ? detail::floor_mod(s.d.at(j, j), m) : BigInt(0);
        BigInt g = (dj == 0) ? m : BigInt(boost::multiprecision::gcd(dj, m));
        if (g == 1)
            continue;
        BigInt mult = m / g;
        std::vector<Scalar> col(c);
        for (std::size_t i = 0; i < c; ++i)
            col[i] = ring.from_int(s.v.at(i, j) * mult);
        cols.push_back(std::move(col));
        ann.push_back(g == m ? BigInt(0) : g);
    }
    return {IntMatrix::from_columns(ring, c, cols), std::move(ann)};
}

namespace detail {

// Row-style Hermite normal form of the row lattice; returns the nonzero rows.
inline DenseInt hermite_rows(DenseInt m)
{
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols && row < m.rows; ++col) {
        for (;;) {
            std::optional<std::size_t> best;
            for (std::size_t i = row; i < m.rows; ++i)
                if (m.at(i, col) != 0 && (!best || abs_int(m.at(i, col)) < abs_int(m.at(*best, col))))
                    best = i;
            if (!best)
                break;
            m.swap_rows(row, *best);
            bool rest = false;
            for (std::size_t i = row + 1; i < m.rows; ++i)
                if (m.at(i, col) != 0) {
                    BigInt q = m.at(i, col) / m.at(row, col);
                    m.row_sub(i, row, q);
                    if (m.at(i, col) != 0)
                        rest = true;
                }
            if (!rest)
                break;
        }
        if (m.at(row, col) == 0)
            continue;
        if (m.at(row, col) < 0)
            m.negate_row(row);
        for (std::size_t i = 0; i < row; ++i) {
            BigInt q = floor_div(m.at(i, col), m.at(row, col));
            if (q != 0)
                m.row_sub(i, row, q);
        }
        ++row;
    }
    DenseInt out(row, m.cols);
    std::copy(m.a.begin(), m.a.begin() + static_cast<std::ptrdiff_t>(row * m.cols), out.a.begin());
    return out;
}

} // namespace detail

// Canonical generating rows of the row span: Hermite normal form over Z,
// reduced row echelon form over Q, and over Z/m the Hermite form of the
// preimage lattice L + mZ^k with rows that vanish mod m dropped. Two inputs
// span the same submodule iff their canonical forms are equal.
inline IntMatrix canonical_row_span(const IntMatrix& M)
{
    const Ring& ring = M.ring();
    if (ring.kind() == Ring::Kind::Rationals) {
        std::vector<std::vector<Scalar>> rows;
        for (std::size_t i = 0; i < M.rows(); ++i)
            rows.push_back(M.row(i));
        std::size_t r = 0;
        for (std::size_t col = 0; col < M.cols() && r < rows.size(); ++col) {
            std::size_t p = r;
            while (p < rows.size() && rows[p][col] == 0)
                ++p;
            if (p == rows.size())
                continue;
            std::swap(rows[r], rows[p]);
            Scalar inv = Scalar(1) / rows[r][col];
            for (auto& e : rows[r])
                e *= inv;
            for (std::size_t i = 0; i < rows.size(); ++i)
                if (i != r && rows[i][col] != 0) {
                    Scalar f = rows[i][col];
                    for (std::size_t j = 0; j < M.cols(); ++j)
                        rows[i][j] -= f * rows[r][j];
                }
            ++r;
        }
        std::vector<Scalar> e;
        for (std::size_t i = 0; i < r; ++i)
            e.insert(e.end(), rows[i].begin(), rows[i].end());
        return IntMatrix(ring, r, M.cols(), std::move(e));
    }
    detail::DenseInt lifted = detail::lift(M);
    if (ring.kind() == Ring::Kind::IntegersMod) {
        detail::DenseInt aug(M.rows() + M.cols(), M.cols());
        std::copy(lifted.a.begin(), lifted.a.end(), aug.a.begin());
        for (std::size_t j = 0; j < M.cols(); ++j)
            aug.at(M.rows() + j, j) = ring.modulus();
        auto h = detail::hermite_rows(std::move(aug));
        std::vector<Scalar> e;
        std::size_t kept = 0;
        for (std::size_t i = 0; i < h.rows; ++i) {
            bool vanishes = true;
            for (std::size_t j = 0; j < h.cols; ++j)
                if (detail::floor_mod(h.at(i, j), ring.modulus()) != 0)
                    vanishes = false;
            if (vanishes)
                continue;
            for (std::size_t j = 0; j < h.cols; ++j)
                e.push_back(Scalar(h.at(i, j)));
            ++kept;
        }
        return IntMatrix(ring, kept, M.cols(), std::move(e));
    }
    auto h = detail::hermite_rows(std::move(lifted));
    return detail::lower(ring, h);
}

inline bool same_column_span(const IntMatrix& A, const IntMatrix& B)
{
    require_same_ring(A.ring(), B.ring());
    if (A.rows() != B.rows())
        throw Error("shape", "column spans live in different ambient modules");
    return canonical_row_span(A.transpose()) == canonical_row_span(B.transpose());
}

// Whether v lies in the column span of B.
inline bool in_column_span(const IntMatrix& B, const std::vector<Scalar>& v)
{
    if (v.size() != B.rows())
        throw Error("shape", "vector length does not match row count");
    const Ring& ring = B.ring();
    auto snf = smith_normal_form(B);
    auto uv = snf.U.apply(v);
    for (std::size_t i = 0; i < uv.size(); ++i) {
        Scalar d = (i < std::min(B.rows(), B.cols())) ? snf.D(i, i) : Scalar(0);
        if (d == 0) {
            if (uv[i] != 0)
                return false;
            continue;
        }
        if (ring.kind() == Ring::Kind::Rationals)
            continue;
        if (boost::multiprecision::numerator(uv[i]) % boost::multiprecision::numerator(d) != 0)
            return false;
    }
    return true;
}

// Kernel of M restricted to vectors supported on columns of weight <= k,
// computed for k = 0, 1, ..., max weight so that each level extends the
// previous one. `column_weight` must be nondecreasing.
struct FilteredKernel {
    std::vector<std::vector<Scalar>> vectors;
    std::vector<int> weight;             // filtration level at which each vector entered
    std::vector<BigInt> annihilators;    // 0 = free
    std::vector<std::size_t> ranks_per_weight;
};

inline FilteredKernel filtered_kernel(const IntMatrix& M, const std::vector<int>& column_weight,
                                      const std::stop_token& stop = {})
{
    if (column_weight.size() != M.cols())
        throw Error("shape", "one weight per column required");
    if (!std::is_sorted(column_weight.begin(), column_weight.end()))
        throw Error("shape", "column weights must be nondecreasing");
    const Ring& ring = M.ring();
    FilteredKernel out;
    if (M.cols() == 0)
        return out;
    const int top = column_weight.back();
    const bool minimal_extension = ring.kind() != Ring::Kind::IntegersMod || ring.is_prime_modulus();
    std::size_t prev_cols = 0;
    for (int k = 0; k <= top; ++k) {
        detail::check_stop(stop);
        std::size_t ck = static_cast<std::size_t>(
            std::upper_bound(column_weight.begin(), column_weight.end(), k) - column_weight.begin());
        std::size_t added = 0;
        if (ck > prev_cols) {
            IntMatrix sub = M.block(0, M.rows(), 0, ck);
            auto K = kernel_basis(sub, stop);
            auto pad = [&](std::vector<Scalar> v) {
                v.resize(M.cols(), Scalar(0));
                return v;
            };
            if (minimal_extension) {
                IntMatrix proj = K.generators.block(prev_cols, ck, 0, K.size());
                auto snf = smith_normal_form(proj, stop);
                IntMatrix moved = K.generators * snf.V;
                for (std::size_t j = 0; j < snf.rank; ++j) {
                    out.vectors.push_back(pad(moved.column(j)));
                    out.weight.push_back(k);
                    out.annihilators.push_back(BigInt(0));
                    ++added;
                }
            } else {
                for (std::size_t j = 0; j < K.size(); ++j) {
                    auto col = K.generators.column(j);
                    bool reaches = std::any_of(col.begin() + static_cast<std::ptrdiff_t>(prev_cols), col.end(),
                                               [](const Scalar& e) { return e != 0; });
                    if (!reaches)
                        continue;
                    out.vectors.push_back(pad(std::move(col)));
                    out.weight.push_back(k);
                    out.annihilators.push_back(K.annihilators[j]);
                    ++added;
                }
            }
        }
        out.ranks_per_weight.push_back(added);
        prev_cols = ck;
    }
    return out;
}

} // namespace lbraid
