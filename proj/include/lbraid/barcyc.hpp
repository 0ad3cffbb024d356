#pragma once

// Bar(A) = T(s^{-1} Abar) and Cyc(A; M) = M (x) T(s^{-1} Abar) for
// M in {A, Abar, R}, with the signed differentials
//
//   d(m0[a1|..|an]) = d(m0)[a1|..|an]
//                     - sum_i (-1)^{e_{i-1}} m0[..|d a_i|..]
//                     - (-1)^{|m0|} (m0 a1)[a2|..|an]
//                     - sum_{i<n} (-1)^{e_i} m0[..|a_i a_{i+1}|..]
//                     + (-1)^{e_{n-1}(|a_n|-1)} (a_n m0)[a1|..|a_{n-1}]
//
// where e_i = |m0| + |a1| + .. + |a_i| - i. Bar(A) is Cyc(A; R), in which
// the action terms vanish through the augmentation.
//
// H^0 is computed degree-0, weight-filtered: ker(d_Bar) for the bar complex,
// ker(d_Bar) and ker(sigma - 1) for the cyclic one.

#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <stop_token>
#include <utility>
#include <vector>

#include "lbraid/braiding.hpp"
#include "lbraid/coeff.hpp"
#include "lbraid/dga.hpp"
#include "lbraid/error.hpp"

namespace lbraid {

using BarSequence = std::vector<BasisRef>;

// total degree sum (|a_i| - 1)
inline int bar_degree(const BarSequence& s)
{
    int d = 0;
    for (const auto& b : s)
        d += b.degree - 1;
    return d;
}

namespace detail {

inline int sign_of(long e) { return (e % 2 == 0) ? 1 : -1; }

inline void require_connected(const std::shared_ptr<const FiniteDGA>& A)
{
    if (!A)
        throw Error("shape", "missing algebra");
    if (!A->is_connected())
        throw Error("not_connected_algebra", "C^0 is not spanned by an augmented unit (one-vertex models only)");
}

inline Combination apply_d(const FiniteDGA& A, BasisRef b)
{
    Combination out;
    if (b.degree >= A.max_degree())
        return out;
    const IntMatrix& d = A.differential(b.degree);
    for (std::size_t k = 0; k < d.rows(); ++k)
        if (d(k, static_cast<std::size_t>(b.index)) != 0)
            out.emplace(static_cast<int>(k), d(k, static_cast<std::size_t>(b.index)));
    return out;
}

// Terms of the differential that act inside the tensor part: internal
// differentials and adjacent products. `m0deg` is |m0| (0 for the bar case).
template <class Emit>
void inner_terms(const FiniteDGA& A, int m0deg, const BarSequence& seq, const Scalar& c, Emit&& emit)
{
    const std::size_t n = seq.size();
    std::vector<long> eps(n + 1);
    eps[0] = m0deg;
    for (std::size_t i = 1; i <= n; ++i)
        eps[i] = eps[i - 1] + seq[i - 1].degree - 1;
    for (std::size_t i = 1; i <= n; ++i) {
        const BasisRef a = seq[i - 1];
        for (const auto& [k, dc] : apply_d(A, a)) {
            BarSequence s = seq;
            s[i - 1] = {a.degree + 1, k};
            emit(s, Scalar(-sign_of(eps[i - 1])) * c * dc);
        }
    }
    for (std::size_t i = 1; i < n; ++i) {
        const BasisRef a = seq[i - 1], b = seq[i];
        for (const auto& [k, pc] : A.product(a, b)) {
            BarSequence s(seq.begin(), seq.begin() + static_cast<std::ptrdiff_t>(i) - 1);
            s.push_back({a.degree + b.degree, k});
            s.insert(s.end(), seq.begin() + static_cast<std::ptrdiff_t>(i) + 1, seq.end());
            emit(s, Scalar(-sign_of(eps[i])) * c * pc);
        }
    }
}

} // namespace detail

class BarElement {
public:
    using Terms = std::map<BarSequence, Scalar>;

    explicit BarElement(std::shared_ptr<const FiniteDGA> A) : A_(std::move(A)) { detail::require_connected(A_); }

    const FiniteDGA& algebra() const noexcept { return *A_; }
    const std::shared_ptr<const FiniteDGA>& algebra_ptr() const noexcept { return A_; }
    const Ring& ring() const noexcept { return A_->ring(); }
    const Terms& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }

    void add_term(const BarSequence& s, const Scalar& c)
    {
        for (const auto& b : s)
            if (b.degree < 1 || b.degree > A_->max_degree() || b.index < 0 ||
                static_cast<std::size_t>(b.index) >= A_->dim(b.degree))
                throw Error("shape", "bar entries must be basis elements of positive degree");
        Scalar v = ring().normalize(c);
        if (v == 0)
            return;
        auto [it, fresh] = terms_.emplace(s, v);
        if (!fresh) {
            it->second = ring().add(it->second, v);
            if (it->second == 0)
                terms_.erase(it);
        }
    }

    Scalar coefficient(const BarSequence& s) const
    {
        auto it = terms_.find(s);
        return it == terms_.end() ? Scalar(0) : it->second;
    }

    BarElement& operator+=(const BarElement& o)
    {
        check(o);
        for (const auto& [s, c] : o.terms_)
            add_term(s, c);
        return *this;
    }
    BarElement& operator-=(const BarElement& o)
    {
        check(o);
        for (const auto& [s, c] : o.terms_)
            add_term(s, -c);
        return *this;
    }
    friend BarElement operator+(BarElement a, const BarElement& b) { return a += b; }
    friend BarElement operator-(BarElement a, const BarElement& b) { return a -= b; }
    BarElement scaled(const Scalar& c) const
    {
        BarElement out(A_);
        for (const auto& [s, v] : terms_)
            out.add_term(s, v * c);
        return out;
    }
    friend bool operator==(const BarElement& a, const BarElement& b) { return a.A_ == b.A_ && a.terms_ == b.terms_; }

private:
    void check(const BarElement& o) const
    {
        if (o.A_ != A_)
            throw Error("ring_mismatch", "bar elements over different algebras");
    }

    std::shared_ptr<const FiniteDGA> A_;
    Terms terms_;
};

enum class CycModule { A, Abar, R };

struct CycKey {
    BasisRef m0;
    BarSequence seq;
    friend auto operator<=>(const CycKey&, const CycKey&) = default;
};

class CycElement {
public:
    using Terms = std::map<CycKey, Scalar>;

    CycElement(std::shared_ptr<const FiniteDGA> A, CycModule m) : A_(std::move(A)), module_(m)
    {
        detail::require_connected(A_);
    }

    const FiniteDGA& algebra() const noexcept { return *A_; }
    const std::shared_ptr<const FiniteDGA>& algebra_ptr() const noexcept { return A_; }
    CycModule module() const noexcept { return module_; }
    const Ring& ring() const noexcept { return A_->ring(); }
    const Terms& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }

    // |m0| as it enters the signs; the R slot has degree 0
    int m0_degree(BasisRef m0) const { return module_ == CycModule::R ? 0 : m0.degree; }

    void add_term(BasisRef m0, const BarSequence& s, const Scalar& c)
    {
        switch (module_) {
        case CycModule::R:
            if (!(m0 == BasisRef{0, 0}))
                throw Error("shape", "Cyc(A;R) has only the unit scalar in the module slot");
            break;
        case CycModule::Abar:
            if (m0.degree < 1)
                throw Error("shape", "Cyc(A;Abar) module slot must avoid the unit direction");
            [[fallthrough]];
        case CycModule::A:
            if (m0.degree < 0 || m0.degree > A_->max_degree() || m0.index < 0 ||
                static_cast<std::size_t>(m0.index) >= A_->dim(m0.degree))
                throw Error("shape", "module slot is not a basis element");
            break;
        }
        for (const auto& b : s)
            if (b.degree < 1 || b.degree > A_->max_degree() || b.index < 0 ||
                static_cast<std::size_t>(b.index) >= A_->dim(b.degree))
                throw Error("shape", "bar entries must be basis elements of positive degree");
        Scalar v = ring().normalize(c);
        if (v == 0)
            return;
        auto [it, fresh] = terms_.emplace(CycKey{m0, s}, v);
        if (!fresh) {
            it->second = ring().add(it->second, v);
            if (it->second == 0)
                terms_.erase(it);
        }
    }

    CycElement& operator+=(const CycElement& o)
    {
        check(o);
        for (const auto& [k, c] : o.terms_)
            add_term(k.m0, k.seq, c);
        return *this;
    }
    CycElement& operator-=(const CycElement& o)
    {
        check(o);
        for (const auto& [k, c] : o.terms_)
            add_term(k.m0, k.seq, -c);
        return *this;
    }
    friend CycElement operator+(CycElement a, const CycElement& b) { return a += b; }
    friend CycElement operator-(CycElement a, const CycElement& b) { return a -= b; }
    friend bool operator==(const CycElement& a, const CycElement& b)
    {
        return a.A_ == b.A_ && a.module_ == b.module_ && a.terms_ == b.terms_;
    }

private:
    void check(const CycElement& o) const
    {
        if (o.A_ != A_ || o.module_ != module_)
            throw Error("ring_mismatch", "cyclic elements over different algebras or modules");
    }

    std::shared_ptr<const FiniteDGA> A_;
    CycModule module_;
    Terms terms_;
};

inline BarElement bar_differential(const BarElement& x)
{
    BarElement out(x.algebra_ptr());
    for (const auto& [seq, c] : x.terms())
        detail::inner_terms(x.algebra(), 0, seq, c, [&](const BarSequence& s, const Scalar& v) { out.add_term(s, v); });
    return out;
}

inline CycElement cyc_differential(const CycElement& x)
{
    const FiniteDGA& A = x.algebra();
    const bool acts = x.module() != CycModule::R;
    CycElement out(x.algebra_ptr(), x.module());
    for (const auto& [key, c] : x.terms()) {
        const BasisRef m0 = key.m0;
        const BarSequence& seq = key.seq;
        const int m0deg = x.m0_degree(m0);
        const std::size_t n = seq.size();
        if (acts)
            for (const auto& [k, dc] : detail::apply_d(A, m0))
                out.add_term({m0.degree + 1, k}, seq, c * dc);
        detail::inner_terms(A, m0deg, seq, c, [&](const BarSequence& s, const Scalar& v) { out.add_term(m0, s, v); });
        if (!acts || n == 0)
            continue;
        for (const auto& [k, pc] : A.product(m0, seq[0]))
            out.add_term({m0.degree + seq[0].degree, k}, BarSequence(seq.begin() + 1, seq.end()),
                         Scalar(-detail::sign_of(m0deg)) * c * pc);
        long eps = m0deg;
        for (std::size_t i = 0; i + 1 < n; ++i)
            eps += seq[i].degree - 1;
        const BasisRef an = seq.back();
        for (const auto& [k, pc] : A.product(an, m0))
            out.add_term({an.degree + m0.degree, k}, BarSequence(seq.begin(), seq.end() - 1),
                         Scalar(detail::sign_of(eps * (an.degree - 1))) * c * pc);
    }
    return out;
}

// v_1 (x) .. (x) v_n -> (-1)^{(|v_1|+..+|v_{n-1}|)|v_n|} v_n (x) v_1 (x) .. (x) v_{n-1},
// with |v_i| = |a_i| - 1 the shifted degrees
inline BarElement sigma(const BarElement& x)
{
    BarElement out(x.algebra_ptr());
    for (const auto& [seq, c] : x.terms()) {
        if (seq.size() < 2) {
            out.add_term(seq, c);
            continue;
        }
        long head = 0;
        for (std::size_t i = 0; i + 1 < seq.size(); ++i)
            head += seq[i].degree - 1;
        BarSequence r;
        r.push_back(seq.back());
        r.insert(r.end(), seq.begin(), seq.end() - 1);
        out.add_term(r, Scalar(detail::sign_of(head * (seq.back().degree - 1))) * c);
    }
    return out;
}

// [a1|..|an] -> a1[a2|..|an] in Cyc(A; Abar); weight 0 maps to 0
inline CycElement iota(const BarElement& x)
{
    CycElement out(x.algebra_ptr(), CycModule::Abar);
    for (const auto& [seq, c] : x.terms())
        if (!seq.empty())
            out.add_term(seq.front(), BarSequence(seq.begin() + 1, seq.end()), c);
    return out;
}

// [a1|..|an] -> 1[a1|..|an] in Cyc(A; A)
inline CycElement tau(const BarElement& x)
{
    CycElement out(x.algebra_ptr(), CycModule::A);
    for (const auto& [seq, c] : x.terms())
        out.add_term({0, 0}, seq, c);
    return out;
}

// Cyc(A; Abar) -> Cyc(A; A), induced by the inclusion Abar -> A
inline CycElement include(const CycElement& y)
{
    if (y.module() != CycModule::Abar)
        throw Error("shape", "include expects an element of Cyc(A;Abar)");
    CycElement out(y.algebra_ptr(), CycModule::A);
    for (const auto& [k, c] : y.terms())
        out.add_term(k.m0, k.seq, c);
    return out;
}

// Cyc(A; A) -> Cyc(A; R) = Bar(A), applying the augmentation to m0
inline BarElement augment(const CycElement& y)
{
    BarElement out(y.algebra_ptr());
    for (const auto& [k, c] : y.terms()) {
        if (y.module() == CycModule::R) {
            out.add_term(k.seq, c);
        } else if (k.m0.degree == 0) {
            out.add_term(k.seq, c * y.algebra().augmentation()[static_cast<std::size_t>(k.m0.index)]);
        }
    }
    return out;
}

inline CycElement connecting_map(const BarElement& x)
{
    for (const auto& [seq, c] : x.terms())
        if (bar_degree(seq) != 0)
            throw Error("not_a_cocycle", "connecting_map expects a degree-0 element");
    if (!bar_differential(x).is_zero())
        throw Error("not_a_cocycle", "element is not closed under d_Bar");
    return iota(sigma(x) - x);
}

struct H0Basis {
    std::vector<BarElement> basis;
    std::vector<int> weights;                  // weight at which each member entered
    std::vector<std::size_t> ranks_per_weight; // new generators in weights 0..n
    std::vector<BigInt> annihilators;          // 0 = free (only nonzero over composite Z/m)
    std::size_t rank() const noexcept { return basis.size(); }
};

namespace detail {

inline BarSequence degree_one_sequence(const Sequence& s)
{
    BarSequence b;
    b.reserve(s.size());
    for (int x : s)
        b.push_back({1, x});
    return b;
}

// Columns: degree-0 sequences of degree-1 basis elements, indexed by idx.
// Rows: their d_Bar images (in key order), then sigma - 1 when cyclic.
inline IntMatrix h0_matrix(const std::shared_ptr<const FiniteDGA>& A, const SequenceIndex& idx, bool cyclic,
                           const std::stop_token& stop)
{
    std::vector<BarElement> images;
    std::set<BarSequence> keys;
    images.reserve(idx.size());
    for (std::size_t j = 0; j < idx.size(); ++j) {
        check_stop(stop);
        BarElement e(A);
        e.add_term(degree_one_sequence(idx.at(j)), Scalar(1));
        images.push_back(bar_differential(e));
        for (const auto& [s, c] : images.back().terms())
            keys.insert(s);
    }
    std::map<BarSequence, std::size_t> row_of;
    for (const auto& k : keys)
        row_of.emplace(k, row_of.size());
    const std::size_t extra = cyclic ? idx.size() : 0;
    IntMatrix M(A->ring(), keys.size() + extra, idx.size());
    for (std::size_t j = 0; j < idx.size(); ++j)
        for (const auto& [s, c] : images[j].terms())
            M.add_to(row_of.at(s), j, c);
    if (cyclic)
        for (std::size_t j = 0; j < idx.size(); ++j) {
            // sigma on degree-1 entries is the plain rotation
            M.add_to(keys.size() + idx.index_of(rotate_right(idx.at(j))), j, Scalar(1));
            M.add_to(keys.size() + j, j, Scalar(-1));
        }
    return M;
}

inline H0Basis h0_impl(const std::shared_ptr<const FiniteDGA>& A, int n, bool cyclic, const std::stop_token& stop)
{
    require_connected(A);
    if (n < 0)
        throw Error("domain", "negative weight bound");
    SequenceIndex idx(A->dim(1), n);
    IntMatrix M = h0_matrix(A, idx, cyclic, stop);
    auto fk = filtered_kernel(M, idx.weights(), stop);
    H0Basis out;
    out.ranks_per_weight = fk.ranks_per_weight;
    out.ranks_per_weight.resize(static_cast<std::size_t>(n) + 1, 0);
    out.weights = fk.weight;
    out.annihilators = fk.annihilators;
    for (const auto& v : fk.vectors) {
        BarElement e(A);
        for (std::size_t j = 0; j < v.size(); ++j)
            e.add_term(degree_one_sequence(idx.at(j)), v[j]);
        out.basis.push_back(std::move(e));
    }
    return out;
}

} // namespace detail

inline H0Basis h0_bar(const std::shared_ptr<const FiniteDGA>& A, int n, const std::stop_token& stop = {})
{
    return detail::h0_impl(A, n, false, stop);
}

inline H0Basis h0_cyc(const std::shared_ptr<const FiniteDGA>& A, int n, const std::stop_token& stop = {})
{
    return detail::h0_impl(A, n, true, stop);
}

// Number of free summands of the coinvariants (R^{S^p})_sigma = coker(sigma - 1).
inline std::size_t coinvariant_rank(const GenSet& S, int p, const Ring& ring = Ring::integers())
{
    if (p < 1)
        throw Error("domain", "coinvariant_rank needs p >= 1");
    SequenceIndex idx(S.size(), p);
    const std::size_t off = idx.offset(p), size = idx.size() - off;
    IntMatrix M(ring, size, size);
    for (std::size_t j = 0; j < size; ++j) {
        M.add_to(idx.index_of(rotate_right(idx.at(off + j))) - off, j, Scalar(1));
        M.add_to(j, j, Scalar(-1));
    }
    return size - rank(M);
}

// Identification of degree-0 bar elements with braiding tensors when the
// degree-1 basis of A is indexed like S.
inline GenSet generator_set(const FiniteDGA& A) { return GenSet(A.labels(1)); }

inline BraidingTensor to_tensor(const BarElement& x, const GenSet& S)
{
    if (x.algebra().dim(1) != S.size())
        throw Error("gen_mismatch", "degree-1 basis and generating set differ in size");
    BraidingTensor t(x.ring(), S);
    for (const auto& [seq, c] : x.terms()) {
        Sequence s;
        for (const auto& b : seq) {
            if (b.degree != 1)
                throw Error("domain", "only degree-0 tensors of degree-1 elements are braiding tensors");
            s.push_back(b.index);
        }
        t.add_term(s, c);
    }
    return t;
}

inline BarElement from_tensor(const std::shared_ptr<const FiniteDGA>& A, const BraidingTensor& t)
{
    if (A->dim(1) != t.gens().size())
        throw Error("gen_mismatch", "degree-1 basis and generating set differ in size");
    require_same_ring(A->ring(), t.ring());
    BarElement x(A);
    for (const auto& [s, c] : t.terms())
        x.add_term(detail::degree_one_sequence(s), c);
    return x;
}

} // namespace lbraid
