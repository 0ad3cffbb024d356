#pragma once

// Braiding tensors sum c [d_{x_1}|...|d_{x_p}] over generator sequences x,
// written in the basis of dual indicators d_s in R^S, and their
// letter-braiding evaluation on words of F_S.

#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "lbraid/coeff.hpp"
#include "lbraid/error.hpp"
#include "lbraid/freegroup.hpp"

namespace lbraid {

using Sequence = std::vector<int>;

// All sequences over an alphabet of size k with length <= max_len, indexed
// in shortlex order. Tensor coordinates everywhere use this order.
class SequenceIndex {
public:
    SequenceIndex(std::size_t alphabet, int max_len) : alphabet_(alphabet), max_len_(max_len)
    {
        if (max_len < 0)
            throw Error("domain", "negative weight bound");
        offsets_.push_back(0);
        std::vector<Sequence> layer{Sequence{}};
        for (int len = 0; len <= max_len; ++len) {
            seqs_.insert(seqs_.end(), layer.begin(), layer.end());
            offsets_.push_back(seqs_.size());
            if (len == max_len)
                break;
            std::vector<Sequence> next;
            next.reserve(layer.size() * alphabet);
            for (const auto& s : layer)
                for (std::size_t g = 0; g < alphabet; ++g) {
                    Sequence t = s;
                    t.push_back(static_cast<int>(g));
                    next.push_back(std::move(t));
                }
            layer = std::move(next);
        }
    }

    std::size_t alphabet() const noexcept { return alphabet_; }
    int max_length() const noexcept { return max_len_; }
    std::size_t size() const noexcept { return seqs_.size(); }
    const Sequence& at(std::size_t i) const { return seqs_.at(i); }
    const std::vector<Sequence>& sequences() const noexcept { return seqs_; }

    // first index of the given length; offset(max_len + 1) == size()
    std::size_t offset(int len) const { return offsets_.at(static_cast<std::size_t>(len)); }

    std::size_t index_of(const Sequence& s) const
    {
        if (static_cast<int>(s.size()) > max_len_)
            throw Error("domain", "sequence longer than the weight bound");
        std::size_t idx = 0;
        for (int x : s) {
            if (x < 0 || static_cast<std::size_t>(x) >= alphabet_)
                throw Error("gen_mismatch", "sequence entry out of range");
            idx = idx * alphabet_ + static_cast<std::size_t>(x);
        }
        return offset(static_cast<int>(s.size())) + idx;
    }

    std::vector<int> weights() const
    {
        std::vector<int> w(seqs_.size());
        for (std::size_t i = 0; i < seqs_.size(); ++i)
            w[i] = static_cast<int>(seqs_[i].size());
        return w;
    }

private:
    std::size_t alphabet_;
    int max_len_;
    std::vector<Sequence> seqs_;
    std::vector<std::size_t> offsets_;
};

// An element h of R^S, extended to inverse letters by h(s^-1) = -h(s).
struct Functional {
    std::vector<Scalar> values;

    Scalar operator()(const Letter& l) const
    {
        const Scalar& v = values.at(static_cast<std::size_t>(l.gen));
        return l.sign > 0 ? v : Scalar(-v);
    }

    static Functional indicator(std::size_t num_gens, int gen)
    {
        Functional h{std::vector<Scalar>(num_gens, Scalar(0))};
        h.values.at(static_cast<std::size_t>(gen)) = 1;
        return h;
    }
};

class BraidingTensor {
public:
    using Terms = std::map<Sequence, Scalar, ShortLex>;

    BraidingTensor() = default;
    BraidingTensor(Ring ring, GenSet gens) : ring_(std::move(ring)), gens_(std::move(gens)) {}

    static BraidingTensor constant(const Ring& ring, const GenSet& gens, const Scalar& c)
    {
        BraidingTensor t(ring, gens);
        t.add_term({}, c);
        return t;
    }

    static BraidingTensor indicator(const Ring& ring, const GenSet& gens, const Sequence& seq,
                                    const Scalar& c = Scalar(1))
    {
        BraidingTensor t(ring, gens);
        t.add_term(seq, c);
        return t;
    }

    // [h_1|...|h_p] expanded in the indicator basis.
    static BraidingTensor pure(const Ring& ring, const GenSet& gens, const std::vector<Functional>& hs,
                               const Scalar& c = Scalar(1))
    {
        BraidingTensor t(ring, gens);
        SequenceIndex idx(gens.size(), static_cast<int>(hs.size()));
        for (std::size_t i = idx.offset(static_cast<int>(hs.size())); i < idx.size(); ++i) {
            const Sequence& s = idx.at(i);
            Scalar prod = c;
            for (std::size_t j = 0; j < s.size() && prod != 0; ++j)
                prod *= hs[j].values.at(static_cast<std::size_t>(s[j]));
            t.add_term(s, prod);
        }
        return t;
    }

    const Ring& ring() const noexcept { return ring_; }
    const GenSet& gens() const noexcept { return gens_; }
    const Terms& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }

    void add_term(const Sequence& seq, const Scalar& c)
    {
        for (int x : seq)
            if (x < 0 || static_cast<std::size_t>(x) >= gens_.size())
                throw Error("gen_mismatch", "tensor entry outside the generating set");
        Scalar v = ring_.normalize(c);
        if (v == 0)
            return;
        auto [it, fresh] = terms_.emplace(seq, v);
        if (fresh)
            return;
        it->second = ring_.add(it->second, v);
        if (it->second == 0)
            terms_.erase(it);
    }

    Scalar coefficient(const Sequence& seq) const
    {
        auto it = terms_.find(seq);
        return it == terms_.end() ? Scalar(0) : it->second;
    }

    Scalar constant_term() const { return coefficient({}); }

    // largest weight with a nonzero coefficient (0 for the zero tensor)
    int max_weight() const { return terms_.empty() ? 0 : static_cast<int>(terms_.rbegin()->first.size()); }

    Terms component(std::size_t p) const
    {
        Terms out;
        for (const auto& [s, c] : terms_)
            if (s.size() == p)
                out.emplace(s, c);
        return out;
    }

    std::vector<Scalar> coordinates(const SequenceIndex& idx) const
    {
        std::vector<Scalar> v(idx.size(), Scalar(0));
        for (const auto& [s, c] : terms_)
            v[idx.index_of(s)] = c;
        return v;
    }

    static BraidingTensor from_coordinates(const Ring& ring, const GenSet& gens, const SequenceIndex& idx,
                                           const std::vector<Scalar>& v)
    {
        if (v.size() != idx.size())
            throw Error("shape", "coordinate vector does not match the sequence index");
        BraidingTensor t(ring, gens);
        for (std::size_t i = 0; i < v.size(); ++i)
            t.add_term(idx.at(i), v[i]);
        return t;
    }

    BraidingTensor& operator+=(const BraidingTensor& o)
    {
        check_compatible(o);
        for (const auto& [s, c] : o.terms_)
            add_term(s, c);
        return *this;
    }
    BraidingTensor& operator-=(const BraidingTensor& o)
    {
        check_compatible(o);
        for (const auto& [s, c] : o.terms_)
            add_term(s, -c);
        return *this;
    }
    friend BraidingTensor operator+(BraidingTensor a, const BraidingTensor& b) { return a += b; }
    friend BraidingTensor operator-(BraidingTensor a, const BraidingTensor& b) { return a -= b; }

    BraidingTensor scaled(const Scalar& c) const
    {
        BraidingTensor t(ring_, gens_);
        for (const auto& [s, v] : terms_)
            t.add_term(s, v * c);
        return t;
    }

    friend bool operator==(const BraidingTensor& a, const BraidingTensor& b)
    {
        return a.ring_ == b.ring_ && a.gens_ == b.gens_ && a.terms_ == b.terms_;
    }

private:
    void check_compatible(const BraidingTensor& o) const
    {
        require_same_ring(ring_, o.ring_);
        if (!(gens_ == o.gens_))
            throw Error("gen_mismatch", "tensors over different generating sets");
    }

    Ring ring_ = Ring::integers();
    GenSet gens_;
    Terms terms_;
};

// Letter-braiding evaluation of a fixed tensor. The tensor's sequences are
// arranged in a prefix trie; scanning the word once, each node holds the
// signed count of <_w-increasing index chains spelling its prefix so far.
// A positive letter may be used once per chain position (strict order); an
// inverse letter may be repeated (non-strict order), which is exactly the
// inverse of the positive update.
class BraidingEvaluator {
public:
    explicit BraidingEvaluator(const BraidingTensor& t) : ring_(t.ring()), num_gens_(t.gens().size())
    {
        struct Build {
            std::map<int, int> children;
        };
        std::vector<Build> nodes(1);
        std::vector<std::pair<int, Scalar>> terminal;
        for (const auto& [seq, c] : t.terms()) {
            int cur = 0;
            for (int x : seq) {
                auto it = nodes[static_cast<std::size_t>(cur)].children.find(x);
                if (it == nodes[static_cast<std::size_t>(cur)].children.end()) {
                    int id = static_cast<int>(nodes.size());
                    nodes[static_cast<std::size_t>(cur)].children.emplace(x, id);
                    nodes.push_back({});
                    cur = id;
                } else {
                    cur = it->second;
                }
            }
            terminal.emplace_back(cur, c);
        }
        // renumber breadth-first so parents precede children
        std::vector<int> order{0}, rank(nodes.size(), -1);
        rank[0] = 0;
        for (std::size_t i = 0; i < order.size(); ++i)
            for (const auto& [x, ch] : nodes[static_cast<std::size_t>(order[i])].children) {
                rank[static_cast<std::size_t>(ch)] = static_cast<int>(order.size());
                order.push_back(ch);
            }
        node_count_ = nodes.size();
        edges_.assign(num_gens_, {});
        for (std::size_t i = 0; i < order.size(); ++i)
            for (const auto& [x, ch] : nodes[static_cast<std::size_t>(order[i])].children)
                edges_[static_cast<std::size_t>(x)].emplace_back(static_cast<int>(i), rank[static_cast<std::size_t>(ch)]);
        for (const auto& [node, c] : terminal)
            terminal_.emplace_back(rank[static_cast<std::size_t>(node)], c);
    }

    Scalar operator()(const Word& w) const
    {
        std::vector<BigInt> val(node_count_, BigInt(0));
        val[0] = 1;
        for (const auto& l : w.letters()) {
            if (l.gen < 0 || static_cast<std::size_t>(l.gen) >= num_gens_)
                throw Error("gen_mismatch", "word letter outside the tensor's generating set");
            const auto& es = edges_[static_cast<std::size_t>(l.gen)];
            if (l.sign > 0) {
                for (auto it = es.rbegin(); it != es.rend(); ++it)
                    if (val[static_cast<std::size_t>(it->first)] != 0)
                        val[static_cast<std::size_t>(it->second)] += val[static_cast<std::size_t>(it->first)];
            } else {
                for (const auto& [parent, child] : es)
                    if (val[static_cast<std::size_t>(parent)] != 0)
                        val[static_cast<std::size_t>(child)] -= val[static_cast<std::size_t>(parent)];
            }
        }
        Scalar total = 0;
        for (const auto& [node, c] : terminal_)
            if (val[static_cast<std::size_t>(node)] != 0)
                total += c * Scalar(val[static_cast<std::size_t>(node)]);
        return ring_.normalize(total);
    }

private:
    Ring ring_;
    std::size_t num_gens_;
    std::size_t node_count_ = 1;
    // per generator: (parent, child) trie edges, parents in breadth-first order
    std::vector<std::vector<std::pair<int, int>>> edges_;
    std::vector<std::pair<int, Scalar>> terminal_;
};

inline Scalar eval_word(const BraidingTensor& t, const Word& w) { return BraidingEvaluator(t)(w); }

inline Scalar eval_word(const BraidingTensor& t, const Word& w, const GenSet& word_gens)
{
    if (!(t.gens() == word_gens))
        throw Error("gen_mismatch", "tensor and word use different generating sets");
    return eval_word(t, w);
}

inline Scalar eval_group_ring(const BraidingTensor& t, const GroupRingElement& x)
{
    require_same_ring(t.ring(), x.ring());
    BraidingEvaluator ev(t);
    Scalar total = 0;
    for (const auto& [w, c] : x.terms())
        total += c * ev(w);
    return t.ring().normalize(total);
}

// Value on (s_{m_1}-1)...(s_{m_k}-1): for a pure tensor [h_1|...|h_n] this is
// h_1(s_{m_1})...h_n(s_{m_n}) when k = n and 0 otherwise, which in the
// indicator basis is just the coefficient of the sequence m.
inline Scalar eval_monomial(const BraidingTensor& t, const Monomial& m)
{
    for (int x : m)
        if (x < 0 || static_cast<std::size_t>(x) >= t.gens().size())
            throw Error("gen_mismatch", "monomial entry outside the generating set");
    return t.coefficient(m);
}

// [x_1|...|x_p] -> [x_p|x_1|...|x_{p-1}]
inline Sequence rotate_right(const Sequence& s)
{
    if (s.size() < 2)
        return s;
    Sequence r;
    r.reserve(s.size());
    r.push_back(s.back());
    r.insert(r.end(), s.begin(), s.end() - 1);
    return r;
}

inline BraidingTensor cycle(const BraidingTensor& t)
{
    BraidingTensor out(t.ring(), t.gens());
    for (const auto& [s, c] : t.terms())
        out.add_term(rotate_right(s), c);
    return out;
}

// Orbit sums of length-p sequences under rotation, ordered by the
// lexicographically least orbit member.
inline std::vector<BraidingTensor> cycle_invariant_basis(const GenSet& gens, int p, const Ring& ring)
{
    if (p < 1)
        throw Error("domain", "cycle_invariant_basis needs p >= 1");
    SequenceIndex idx(gens.size(), p);
    std::set<Sequence> seen;
    std::vector<BraidingTensor> out;
    for (std::size_t i = idx.offset(p); i < idx.size(); ++i) {
        const Sequence& s = idx.at(i);
        if (seen.count(s))
            continue;
        BraidingTensor t(ring, gens);
        Sequence cur = s;
        do {
            if (seen.insert(cur).second)
                t.add_term(cur, Scalar(1));
            cur = rotate_right(cur);
        } while (cur != s);
        out.push_back(std::move(t));
    }
    return out;
}

} // namespace lbraid
