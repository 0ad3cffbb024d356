#pragma once

// Finite-type functions and class functions on finitely presented groups.
//
// A tensor T of weight <= n is a function on F_S killing I^{n+1}. It descends
// to G = F_S / <<R>> iff it kills the two-sided ideal generated by r - 1,
// which modulo I^{n+1} is spanned by m_pre (r - 1) m_suf over positive
// monomials of total degree <= n - 1. Class functions are the additionally
// cycle-invariant tensors.
//
// The oracle never looks at tensors: it enumerates words, identifies them
// through relator insertions, and computes Hom(R[G]/I^{k+1}, R) directly.

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <random>
#include <set>
#include <stop_token>
#include <string>
#include <utility>
#include <vector>

#include "lbraid/barcyc.hpp"
#include "lbraid/braiding.hpp"
#include "lbraid/coeff.hpp"
#include "lbraid/dga.hpp"
#include "lbraid/error.hpp"
#include "lbraid/freegroup.hpp"

namespace lbraid {

struct DescendRow {
    std::size_t relator;
    Monomial prefix;
    Monomial suffix;
};

struct DescendSystem {
    int n = 0;
    IntMatrix matrix{Ring::integers(), 0, 0};
    std::vector<DescendRow> rows;
};

// Rows ordered by relator, then prefix, then suffix (both shortlex).
inline DescendSystem descend_conditions(const Presentation& P, int n, const Ring& ring,
                                        const std::stop_token& stop = {})
{
    if (n < 1)
        throw Error("domain", "descend_conditions needs n >= 1");
    SequenceIndex idx(P.gens.size(), n);
    SequenceIndex side(P.gens.size(), n - 1);
    DescendSystem out;
    out.n = n;
    std::vector<std::map<std::size_t, Scalar>> rows;
    for (std::size_t ri = 0; ri < P.relators.size(); ++ri) {
        auto expansion = fox_expand(P.relators[ri], ring, n);
        for (const auto& pre : side.sequences())
            for (const auto& suf : side.sequences()) {
                if (static_cast<int>(pre.size() + suf.size()) > n - 1)
                    continue;
                detail::check_stop(stop);
                std::map<std::size_t, Scalar> row;
                for (const auto& [q, c] : expansion.terms) {
                    if (pre.size() + q.size() + suf.size() > static_cast<std::size_t>(n))
                        continue;
                    Monomial m = pre;
                    m.insert(m.end(), q.begin(), q.end());
                    m.insert(m.end(), suf.begin(), suf.end());
                    row[idx.index_of(m)] += c;
                }
                rows.push_back(std::move(row));
                out.rows.push_back({ri, pre, suf});
            }
    }
    out.matrix = IntMatrix(ring, rows.size(), idx.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (const auto& [j, c] : rows[i])
            out.matrix.add_to(i, j, c);
    return out;
}

struct TensorBasis {
    Ring ring = Ring::integers();
    GenSet gens;
    int n = 0;
    std::string kind; // "finite_type" or "class"
    std::vector<BraidingTensor> tensors;
    std::vector<int> weights;
    std::vector<std::size_t> ranks_per_weight;
    std::vector<BigInt> annihilators;

    std::size_t rank() const noexcept { return tensors.size(); }

    // coordinates as columns, in the shortlex sequence order of weight <= n
    IntMatrix coordinate_matrix() const
    {
        SequenceIndex idx(gens.size(), n);
        std::vector<std::vector<Scalar>> cols;
        for (const auto& t : tensors)
            cols.push_back(t.coordinates(idx));
        return IntMatrix::from_columns(ring, idx.size(), cols);
    }
};

namespace detail {

// rotation rows sigma - 1 on all weight <= n coordinates
inline IntMatrix cycle_rows(const Ring& ring, const SequenceIndex& idx)
{
    IntMatrix M(ring, idx.size(), idx.size());
    for (std::size_t j = 0; j < idx.size(); ++j) {
        M.add_to(idx.index_of(rotate_right(idx.at(j))), j, Scalar(1));
        M.add_to(j, j, Scalar(-1));
    }
    return M;
}

inline TensorBasis basis_from_conditions(const IntMatrix& M, const SequenceIndex& idx, const GenSet& gens, int n,
                                         std::string kind, const std::stop_token& stop)
{
    auto fk = filtered_kernel(M, idx.weights(), stop);
    TensorBasis out;
    out.ring = M.ring();
    out.gens = gens;
    out.n = n;
    out.kind = std::move(kind);
    out.weights = fk.weight;
    out.annihilators = fk.annihilators;
    out.ranks_per_weight = fk.ranks_per_weight;
    out.ranks_per_weight.resize(static_cast<std::size_t>(n) + 1, 0);
    for (const auto& v : fk.vectors)
        out.tensors.push_back(BraidingTensor::from_coordinates(out.ring, gens, idx, v));
    return out;
}

inline IntMatrix presentation_conditions(const Presentation& P, int n, const Ring& ring, bool cyclic,
                                         const SequenceIndex& idx, const std::stop_token& stop)
{
    IntMatrix M = n >= 1 ? descend_conditions(P, n, ring, stop).matrix : IntMatrix(ring, 0, idx.size());
    if (cyclic)
        M = M.stacked(cycle_rows(ring, idx));
    return M;
}

inline TensorBasis basis_of_presentation(const Presentation& P, int n, const Ring& ring, bool cyclic,
                                         const std::stop_token& stop)
{
    if (n < 0)
        throw Error("domain", "negative weight bound");
    SequenceIndex idx(P.gens.size(), n);
    return basis_from_conditions(presentation_conditions(P, n, ring, cyclic, idx, stop), idx, P.gens, n,
                                 cyclic ? "class" : "finite_type", stop);
}

// Presentation conditions of the 2-skeleton stacked with the H^0 conditions
// of the cochain algebra; both index degree-1 generators by edge order.
inline TensorBasis basis_of_complex(const SimplicialSetModel& X, int n, const Ring& ring, bool cyclic,
                                    const std::stop_token& stop)
{
    if (n < 0)
        throw Error("domain", "negative weight bound");
    Presentation P = presentation_of(X);
    auto A = std::make_shared<const FiniteDGA>(cochain_algebra(X, ring, 2));
    if (!(generator_set(*A) == P.gens))
        throw Error("gen_mismatch", "edge order of the complex and its cochain algebra differ");
    SequenceIndex idx(P.gens.size(), n);
    IntMatrix M = presentation_conditions(P, n, ring, cyclic, idx, stop).stacked(h0_matrix(A, idx, cyclic, stop));
    return basis_from_conditions(M, idx, P.gens, n, cyclic ? "class" : "finite_type", stop);
}

} // namespace detail

inline TensorBasis finite_type_basis(const Presentation& P, int n, const Ring& ring,
                                     const std::stop_token& stop = {})
{
    return detail::basis_of_presentation(P, n, ring, false, stop);
}

inline TensorBasis class_function_basis(const Presentation& P, int n, const Ring& ring,
                                        const std::stop_token& stop = {})
{
    return detail::basis_of_presentation(P, n, ring, true, stop);
}

inline TensorBasis finite_type_basis(const SimplicialSetModel& X, int n, const Ring& ring,
                                     const std::stop_token& stop = {})
{
    return detail::basis_of_complex(X, n, ring, false, stop);
}

inline TensorBasis class_function_basis(const SimplicialSetModel& X, int n, const Ring& ring,
                                        const std::stop_token& stop = {})
{
    return detail::basis_of_complex(X, n, ring, true, stop);
}

// Whether t satisfies every descend condition and, if asked, sigma t = t.
inline bool satisfies_conditions(const BraidingTensor& t, const Presentation& P, int n, bool cyclic)
{
    if (t.max_weight() > n)
        return false;
    SequenceIndex idx(P.gens.size(), n);
    IntMatrix M = detail::presentation_conditions(P, n, t.ring(), cyclic, idx, {});
    auto image = M.apply(t.coordinates(idx));
    return std::all_of(image.begin(), image.end(), [](const Scalar& x) { return x == 0; });
}

// ---------------------------------------------------------------------------
// Oracle

struct OracleResult {
    std::vector<std::size_t> ranks; // ranks[k] = rank Hom(R[G]/I^{k+1}, R), k = 0..n
    std::vector<Word> core_words;   // all reduced words of length <= n
    IntMatrix pairing{Ring::integers(), 0, 0}; // canonical rows: type <= n functions on core words
    std::size_t classes = 0;        // group elements identified among enumerated words
};

namespace detail {

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }

    std::size_t find(std::size_t x)
    {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    bool unite(std::size_t a, std::size_t b)
    {
        a = find(a);
        b = find(b);
        if (a == b)
            return false;
        if (b < a)
            std::swap(a, b);
        parent_[b] = a;
        return true;
    }

private:
    std::vector<std::size_t> parent_;
};

inline std::vector<Word> relator_variants(const Presentation& P)
{
    std::set<Word> out;
    for (const auto& r : P.relators)
        for (const Word& base : {r, r.inverse()}) {
            const auto& ls = base.letters();
            for (std::size_t k = 0; k < ls.size(); ++k) {
                std::vector<Letter> rot(ls.begin() + static_cast<std::ptrdiff_t>(k), ls.end());
                rot.insert(rot.end(), ls.begin(), ls.begin() + static_cast<std::ptrdiff_t>(k));
                Word w(rot);
                if (!w.is_identity())
                    out.insert(w);
            }
        }
    return {out.begin(), out.end()};
}

struct WordClasses {
    std::vector<Word> words;
    std::map<Word, std::size_t> index;
    std::vector<std::size_t> class_of;
    std::size_t count = 0;
};

// Identify words of length <= L that are provably equal in G using only
// words of length <= L: relator insertion, closed under one-letter
// multiplication on either side.
inline WordClasses word_classes(const Presentation& P, std::size_t L, const std::stop_token& stop)
{
    WordClasses wc;
    wc.words = enumerate_words(P.gens.size(), L);
    for (std::size_t i = 0; i < wc.words.size(); ++i)
        wc.index.emplace(wc.words[i], i);
    UnionFind uf(wc.words.size());
    auto lookup = [&](const Word& w) -> std::optional<std::size_t> {
        if (w.size() > L)
            return std::nullopt;
        return wc.index.at(w);
    };
    auto variants = relator_variants(P);
    for (std::size_t i = 0; i < wc.words.size(); ++i) {
        check_stop(stop);
        const auto& ls = wc.words[i].letters();
        for (std::size_t p = 0; p <= ls.size(); ++p) {
            Word u(std::vector<Letter>(ls.begin(), ls.begin() + static_cast<std::ptrdiff_t>(p)));
            Word v(std::vector<Letter>(ls.begin() + static_cast<std::ptrdiff_t>(p), ls.end()));
            for (const auto& r : variants)
                if (auto j = lookup(u * r * v))
                    uf.unite(i, *j);
        }
    }
    std::vector<Word> letters;
    for (int g = 0; g < static_cast<int>(P.gens.size()); ++g)
        for (int s : {1, -1})
            letters.push_back(Word::generator(g, s));
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& l : letters)
            for (bool left : {false, true}) {
                check_stop(stop);
                std::map<std::size_t, std::size_t> image;
                for (std::size_t i = 0; i < wc.words.size(); ++i) {
                    auto j = lookup(left ? l * wc.words[i] : wc.words[i] * l);
                    if (!j)
                        continue;
                    auto [it, fresh] = image.emplace(uf.find(i), *j);
                    if (!fresh && uf.unite(it->second, *j))
                        changed = true;
                }
            }
    }
    std::map<std::size_t, std::size_t> id;
    wc.class_of.resize(wc.words.size());
    for (std::size_t i = 0; i < wc.words.size(); ++i)
        wc.class_of[i] = id.emplace(uf.find(i), id.size()).first->second;
    wc.count = id.size();
    return wc;
}

// Functions on classes killing I^{k+1} (and conjugation when asked),
// restricted to the core words and put in canonical row form.
inline IntMatrix oracle_span(const Presentation& P, const WordClasses& wc, std::size_t L, int k,
                             std::size_t core_len, bool class_rows, const Ring& ring, const std::stop_token& stop)
{
    std::set<std::map<std::size_t, Scalar>> rows;
    auto insert_row = [&](std::map<std::size_t, Scalar> row) {
        std::erase_if(row, [&](const auto& kv) { return ring.normalize(kv.second) == 0; });
        if (!row.empty())
            rows.insert(std::move(row));
    };
    const std::size_t deg = static_cast<std::size_t>(k) + 1;
    SequenceIndex idx(P.gens.size(), k + 1);
    for (std::size_t mi = idx.offset(k + 1); mi < idx.size(); ++mi) {
        const Sequence& m = idx.at(mi);
        for (const auto& w : wc.words) {
            if (w.size() + deg > L)
                break; // words are sorted by length
            check_stop(stop);
            std::map<std::size_t, Scalar> row;
            // (s_1 - 1)...(s_{k+1} - 1) w, expanded over subsets
            for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << deg); ++mask) {
                Word x;
                for (std::size_t b = 0; b < deg; ++b)
                    if (mask >> b & 1)
                        x *= Word::generator(m[b]);
                x *= w;
                int sign = ((deg - static_cast<std::size_t>(std::popcount(mask))) % 2) ? -1 : 1;
                row[wc.class_of[wc.index.at(x)]] += sign;
            }
            insert_row(std::move(row));
        }
    }
    if (class_rows)
        for (std::size_t i = 0; i < wc.words.size(); ++i)
            for (int g = 0; g < static_cast<int>(P.gens.size()); ++g)
                for (int s : {1, -1}) {
                    Word t = Word::generator(g, s);
                    Word c = t * wc.words[i] * t.inverse();
                    if (c.size() > L)
                        continue;
                    std::map<std::size_t, Scalar> row;
                    row[wc.class_of[wc.index.at(c)]] += 1;
                    row[wc.class_of[i]] -= 1;
                    insert_row(std::move(row));
                }
    IntMatrix M(ring, rows.size(), wc.count);
    std::size_t r = 0;
    for (const auto& row : rows) {
        for (const auto& [j, c] : row)
            M.add_to(r, j, c);
        ++r;
    }
    auto K = kernel_basis(M, stop);
    std::size_t core = 0;
    while (core < wc.words.size() && wc.words[core].size() <= core_len)
        ++core;
    IntMatrix restricted(ring, K.size(), core);
    for (std::size_t f = 0; f < K.size(); ++f)
        for (std::size_t c = 0; c < core; ++c)
            restricted.set(f, c, K.generators(wc.class_of[c], f));
    return canonical_row_span(restricted);
}

} // namespace detail

// Hom ranks of R[G]/I^{k+1} for k = 0..n from words of length <= L. The
// answer is accepted only if it does not change between L - 1 and L.
inline OracleResult oracle_group_ring_quotient(const Presentation& P, int n, std::size_t L, const Ring& ring,
                                               bool class_functions = false, const std::stop_token& stop = {})
{
    if (n < 0)
        throw Error("domain", "negative weight bound");
    const std::size_t core = static_cast<std::size_t>(n);
    if (L < core + 2)
        throw Error("not_saturated", "word length bound too small for type " + std::to_string(n));
    auto wc = detail::word_classes(P, L, stop);
    auto wc_prev = detail::word_classes(P, L - 1, stop);
    OracleResult out;
    out.classes = wc.count;
    for (int k = 0; k <= n; ++k) {
        IntMatrix span = detail::oracle_span(P, wc, L, k, core, class_functions, ring, stop);
        IntMatrix prev = detail::oracle_span(P, wc_prev, L - 1, k, core, class_functions, ring, stop);
        if (!(span == prev))
            throw Error("not_saturated", "Hom rank at type " + std::to_string(k) + " still changes at length " +
                                             std::to_string(L));
        out.ranks.push_back(span.rows());
        if (k == n)
            out.pairing = span;
    }
    out.core_words.assign(wc.words.begin(),
                          std::find_if(wc.words.begin(), wc.words.end(),
                                       [&](const Word& w) { return w.size() > core; }));
    return out;
}

// The oracle at the smallest L in [n + 2, max_length] that saturates.
inline OracleResult oracle_search(const Presentation& P, int n, const Ring& ring, bool class_functions,
                                  std::size_t max_length, const std::stop_token& stop = {})
{
    for (std::size_t L = static_cast<std::size_t>(n) + 2; L <= max_length; ++L) {
        try {
            return oracle_group_ring_quotient(P, n, L, ring, class_functions, stop);
        } catch (const Error& e) {
            if (e.code() != "not_saturated")
                throw;
        }
    }
    throw Error("not_saturated", "no saturation up to word length " + std::to_string(max_length));
}

// Values of the basis tensors on the given words, in the canonical row form
// used by the oracle.
inline IntMatrix pairing_table(const TensorBasis& B, const std::vector<Word>& words)
{
    IntMatrix M(B.ring, B.tensors.size(), words.size());
    for (std::size_t i = 0; i < B.tensors.size(); ++i) {
        BraidingEvaluator ev(B.tensors[i]);
        for (std::size_t j = 0; j < words.size(); ++j)
            M.set(i, j, ev(words[j]));
    }
    return canonical_row_span(M);
}

// ---------------------------------------------------------------------------
// Sampled invariance checks in F_S

struct SampleBounds {
    std::size_t word_length = 6;      // all w with |w| <= word_length
    std::size_t insert_positions = 6; // relator insertion at positions <= this
    std::size_t conjugator_length = 6;
    std::size_t random_pairs = 200;   // extra random (g, w) conjugation samples
    std::uint64_t seed = 1729;
};

struct SampleVerdict {
    bool pass = true;
    std::string witness; // empty on pass
    explicit operator bool() const noexcept { return pass; }
};

namespace detail {

// Calls fn(x, y, what) for every sampled pair that must evaluate equally;
// stops early when fn returns false.
template <class Fn>
void for_each_sample(const Presentation& P, const SampleBounds& b, Fn&& fn)
{
    const auto words = enumerate_words(P.gens.size(), b.word_length);
    for (const auto& w : words) {
        const auto& ls = w.letters();
        for (std::size_t p = 0; p <= std::min(ls.size(), b.insert_positions); ++p) {
            Word u(std::vector<Letter>(ls.begin(), ls.begin() + static_cast<std::ptrdiff_t>(p)));
            Word v(std::vector<Letter>(ls.begin() + static_cast<std::ptrdiff_t>(p), ls.end()));
            for (const auto& r : P.relators)
                for (const Word& rr : {r, r.inverse()})
                    if (!fn(w, u * rr * v, "relator insertion"))
                        return;
        }
        for (int g = 0; g < static_cast<int>(P.gens.size()); ++g)
            for (int s : {1, -1})
                if (!fn(w, conjugate(Word::generator(g, s), w), "conjugation"))
                    return;
    }
    if (P.gens.size() == 0)
        return;
    std::mt19937_64 rng(b.seed);
    auto random_word = [&](std::size_t max_len) {
        std::uniform_int_distribution<std::size_t> len(0, max_len);
        std::uniform_int_distribution<int> gen(0, static_cast<int>(P.gens.size()) - 1);
        std::vector<Letter> ls(len(rng));
        for (auto& l : ls)
            l = {gen(rng), (rng() & 1) ? 1 : -1};
        return Word(ls);
    };
    for (std::size_t i = 0; i < b.random_pairs; ++i) {
        Word g = random_word(b.conjugator_length);
        Word w = random_word(b.word_length);
        if (!fn(w, conjugate(g, w), "conjugation"))
            return;
    }
}

} // namespace detail

inline SampleVerdict is_class_function_sampled(const BraidingTensor& t, const Presentation& P,
                                               const SampleBounds& bounds = {})
{
    if (!(t.gens() == P.gens))
        throw Error("gen_mismatch", "tensor and presentation use different generators");
    BraidingEvaluator ev(t);
    SampleVerdict out;
    detail::for_each_sample(P, bounds, [&](const Word& x, const Word& y, const char* what) {
        Scalar a = ev(x), b = ev(y);
        if (a == b)
            return true;
        out.pass = false;
        out.witness = std::string(what) + ": T(" + format_word(x, P.gens) + ") = " + a.str() + " but T(" +
                      format_word(y, P.gens) + ") = " + b.str();
        return false;
    });
    return out;
}

// One row per sampled pair and one column per tensor, holding T(x) - T(y):
// the kernel is the set of combinations passing every sampled check.
inline IntMatrix sampled_invariance_rows(const std::vector<BraidingTensor>& tensors, const Presentation& P,
                                         const SampleBounds& bounds = {})
{
    const Ring ring = tensors.empty() ? Ring::integers() : tensors.front().ring();
    std::vector<BraidingEvaluator> evs(tensors.begin(), tensors.end());
    std::set<std::vector<Scalar>> rows;
    detail::for_each_sample(P, bounds, [&](const Word& x, const Word& y, const char*) {
        std::vector<Scalar> row(tensors.size());
        bool nonzero = false;
        for (std::size_t i = 0; i < evs.size(); ++i) {
            row[i] = ring.sub(evs[i](x), evs[i](y));
            nonzero = nonzero || row[i] != 0;
        }
        if (nonzero)
            rows.insert(std::move(row));
        return true;
    });
    IntMatrix M(ring, rows.size(), tensors.size());
    std::size_t r = 0;
    for (const auto& row : rows) {
        for (std::size_t j = 0; j < row.size(); ++j)
            M.set(r, j, row[j]);
        ++r;
    }
    return M;
}

} // namespace lbraid
