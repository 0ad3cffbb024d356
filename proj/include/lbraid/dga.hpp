#pragma once

// Finite augmented dg-algebras over Z, Z/m or Q, with two constructors:
// normalized simplicial cochains under the Alexander-Whitney cup product, and
// square-zero algebras R <+> R^S in degrees 0, 1.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lbraid/coeff.hpp"
#include "lbraid/error.hpp"
#include "lbraid/freegroup.hpp"

namespace lbraid {

struct BasisRef {
    int degree = 0;
    int index = 0;
    friend auto operator<=>(const BasisRef&, const BasisRef&) = default;
};

// sparse linear combination of basis elements within one degree
using Combination = std::map<int, Scalar>;

class FiniteDGA {
public:
    using Vec = std::vector<Scalar>;

    FiniteDGA() = default;

    // labels[d] names the basis of C^d. Products and differentials start out
    // zero; unit and augmentation must be set before use.
    FiniteDGA(Ring ring, std::vector<std::vector<std::string>> labels)
        : ring_(std::move(ring)), labels_(std::move(labels))
    {
        if (labels_.empty())
            throw Error("shape", "an algebra needs at least degree 0");
        for (std::size_t d = 0; d < labels_.size(); ++d)
            diff_.emplace_back(ring_, dim(static_cast<int>(d) + 1), dim(static_cast<int>(d)));
        unit_.assign(dim(0), Scalar(0));
        aug_.assign(dim(0), Scalar(0));
    }

    const Ring& ring() const noexcept { return ring_; }
    int max_degree() const noexcept { return static_cast<int>(labels_.size()) - 1; }
    std::size_t dim(int d) const
    {
        return (d < 0 || d > max_degree()) ? 0 : labels_[static_cast<std::size_t>(d)].size();
    }
    const std::vector<std::string>& labels(int d) const { return labels_.at(static_cast<std::size_t>(d)); }
    const std::string& label(BasisRef b) const
    {
        return labels_.at(static_cast<std::size_t>(b.degree)).at(static_cast<std::size_t>(b.index));
    }

    // products with total degree above max_degree are zero by truncation
    bool truncated() const noexcept { return truncated_; }
    void set_truncated(bool t) { truncated_ = t; }

    // d: C^d -> C^{d+1}, a dim(d+1) x dim(d) matrix
    const IntMatrix& differential(int d) const { return diff_.at(static_cast<std::size_t>(d)); }
    void set_differential(int d, IntMatrix m)
    {
        if (m.rows() != dim(d + 1) || m.cols() != dim(d))
            throw Error("shape", "differential has the wrong shape");
        require_same_ring(ring_, m.ring());
        diff_.at(static_cast<std::size_t>(d)) = std::move(m);
    }

    Combination product(BasisRef a, BasisRef b) const
    {
        auto it = mult_.find({a, b});
        return it == mult_.end() ? Combination{} : it->second;
    }
    void set_product(BasisRef a, BasisRef b, Combination c)
    {
        check_ref(a);
        check_ref(b);
        for (auto it = c.begin(); it != c.end();) {
            it->second = ring_.normalize(it->second);
            it = (it->second == 0) ? c.erase(it) : std::next(it);
        }
        if (c.empty())
            mult_.erase({a, b});
        else
            mult_[{a, b}] = std::move(c);
    }
    const std::map<std::pair<BasisRef, BasisRef>, Combination>& products() const noexcept { return mult_; }

    const Vec& unit() const noexcept { return unit_; }
    void set_unit(Vec u)
    {
        if (u.size() != dim(0))
            throw Error("shape", "unit must live in degree 0");
        unit_ = std::move(u);
    }
    const Vec& augmentation() const noexcept { return aug_; }
    void set_augmentation(Vec a)
    {
        if (a.size() != dim(0))
            throw Error("shape", "augmentation is a functional on degree 0");
        aug_ = std::move(a);
    }

    // C^0 = R spanned by the unit, augmented by 1
    bool is_connected() const
    {
        return dim(0) == 1 && unit_[0] == 1 && aug_[0] == 1;
    }

    Vec basis_vector(BasisRef b) const
    {
        check_ref(b);
        Vec v(dim(b.degree), Scalar(0));
        v[static_cast<std::size_t>(b.index)] = 1;
        return v;
    }

    Vec multiply(int p, const Vec& u, int q, const Vec& v) const
    {
        Vec out(dim(p + q), Scalar(0));
        if (out.empty())
            return out;
        for (std::size_t i = 0; i < u.size(); ++i) {
            if (u[i] == 0)
                continue;
            for (std::size_t j = 0; j < v.size(); ++j) {
                if (v[j] == 0)
                    continue;
                for (const auto& [k, c] : product({p, static_cast<int>(i)}, {q, static_cast<int>(j)}))
                    out[static_cast<std::size_t>(k)] = ring_.add(out[static_cast<std::size_t>(k)], u[i] * v[j] * c);
            }
        }
        return out;
    }

    Vec apply_d(int p, const Vec& u) const
    {
        if (p >= max_degree())
            return {};
        return differential(p).apply(u);
    }

private:
    void check_ref(BasisRef b) const
    {
        if (b.degree < 0 || b.degree > max_degree() || b.index < 0 ||
            static_cast<std::size_t>(b.index) >= dim(b.degree))
            throw Error("shape", "basis reference out of range");
    }

    Ring ring_ = Ring::integers();
    std::vector<std::vector<std::string>> labels_;
    std::vector<IntMatrix> diff_;
    std::map<std::pair<BasisRef, BasisRef>, Combination> mult_;
    Vec unit_, aug_;
    bool truncated_ = false;
};

// ---------------------------------------------------------------------------
// simplicial sets

// A possibly degenerate simplex s_{j_1} ... s_{j_k} x of a nondegenerate
// cell x, the degeneracy word kept in the normal form j_1 > ... > j_k.
struct Simplex {
    int cell = 0;
    std::vector<int> degeneracies;
    bool degenerate() const noexcept { return !degeneracies.empty(); }
    friend bool operator==(const Simplex&, const Simplex&) = default;
};

// Normal form via s_i s_j = s_{j+1} s_i for i <= j.
inline std::vector<int> canonical_degeneracies(std::vector<int> w)
{
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t k = 0; k + 1 < w.size(); ++k)
            if (w[k] <= w[k + 1]) {
                int i = w[k], j = w[k + 1];
                w[k] = j + 1;
                w[k + 1] = i;
                changed = true;
            }
    }
    return w;
}

class SimplicialSetModel {
public:
    struct Cell {
        std::string name;
        int dim = 0;
        std::vector<Simplex> faces; // d_0 ... d_dim
    };

    // Faces may reference cells added earlier or later; call validate() once
    // all cells are in.
    int add_cell(std::string name, int dim, std::vector<Simplex> faces = {})
    {
        if (dim < 0)
            throw Error("bad_simplicial_set", name + ": negative dimension");
        if (find(name))
            throw Error("bad_simplicial_set", "duplicate simplex id '" + name + "'");
        for (auto& f : faces)
            f.degeneracies = canonical_degeneracies(std::move(f.degeneracies));
        int id = static_cast<int>(cells_.size());
        cells_.push_back({std::move(name), dim, std::move(faces)});
        if (static_cast<std::size_t>(dim) >= by_dim_.size())
            by_dim_.resize(static_cast<std::size_t>(dim) + 1);
        index_in_dim_.push_back(static_cast<int>(by_dim_[static_cast<std::size_t>(dim)].size()));
        by_dim_[static_cast<std::size_t>(dim)].push_back(id);
        return id;
    }

    std::size_t size() const noexcept { return cells_.size(); }
    const Cell& cell(int id) const { return cells_.at(static_cast<std::size_t>(id)); }
    int top_dimension() const noexcept { return static_cast<int>(by_dim_.size()) - 1; }
    const std::vector<int>& cells_of_dim(int d) const
    {
        static const std::vector<int> none;
        return (d < 0 || d > top_dimension()) ? none : by_dim_[static_cast<std::size_t>(d)];
    }
    int index_in_dim(int id) const { return index_in_dim_.at(static_cast<std::size_t>(id)); }
    std::size_t vertex_count() const { return cells_of_dim(0).size(); }
    int base_vertex() const
    {
        if (cells_of_dim(0).empty())
            throw Error("bad_simplicial_set", "no vertices");
        return cells_of_dim(0).front();
    }

    std::optional<int> find(std::string_view name) const
    {
        for (std::size_t i = 0; i < cells_.size(); ++i)
            if (cells_[i].name == name)
                return static_cast<int>(i);
        return std::nullopt;
    }

    int dim(const Simplex& x) const { return cell(x.cell).dim + static_cast<int>(x.degeneracies.size()); }

    Simplex face(const Simplex& x, int i) const
    {
        if (i < 0 || i > dim(x) || dim(x) == 0)
            throw Error("bad_simplicial_set", "face index out of range");
        std::vector<int> out;
        const auto& js = x.degeneracies;
        for (std::size_t k = 0; k < js.size(); ++k) {
            int j = js[k];
            if (i < j) {
                out.push_back(j - 1); // d_i s_j = s_{j-1} d_i
            } else if (i == j || i == j + 1) {
                out.insert(out.end(), js.begin() + static_cast<std::ptrdiff_t>(k) + 1, js.end());
                return {x.cell, canonical_degeneracies(std::move(out))};
            } else {
                out.push_back(j); // d_i s_j = s_j d_{i-1}
                --i;
            }
        }
        const Simplex& f = cell(x.cell).faces.at(static_cast<std::size_t>(i));
        out.insert(out.end(), f.degeneracies.begin(), f.degeneracies.end());
        return {f.cell, canonical_degeneracies(std::move(out))};
    }

    // front p-face (vertices 0..p) and back q-face (vertices n-q..n)
    Simplex front(Simplex x, int p) const
    {
        while (dim(x) > p)
            x = face(x, dim(x));
        return x;
    }
    Simplex back(Simplex x, int q) const
    {
        while (dim(x) > q)
            x = face(x, 0);
        return x;
    }

    void validate() const
    {
        for (const auto& c : cells_) {
            if (static_cast<int>(c.faces.size()) != (c.dim == 0 ? 0 : c.dim + 1))
                throw Error("bad_simplicial_set", c.name + ": expected " + std::to_string(c.dim == 0 ? 0 : c.dim + 1) +
                                                      " faces, got " + std::to_string(c.faces.size()));
            for (const auto& f : c.faces) {
                if (f.cell < 0 || static_cast<std::size_t>(f.cell) >= cells_.size())
                    throw Error("bad_simplicial_set", c.name + ": face refers to an unknown simplex");
                int t = cell(f.cell).dim;
                // s_{j_1}...s_{j_k} applied right to left needs j_k <= t, j_{k-1} <= t+1, ...
                int level = t;
                for (auto it = f.degeneracies.rbegin(); it != f.degeneracies.rend(); ++it, ++level)
                    if (*it < 0 || *it > level)
                        throw Error("bad_simplicial_set", c.name + ": degeneracy index out of range");
                if (dim(f) != c.dim - 1)
                    throw Error("bad_simplicial_set", c.name + ": face of the wrong dimension");
            }
        }
        for (std::size_t id = 0; id < cells_.size(); ++id) {
            const auto& c = cells_[id];
            Simplex x{static_cast<int>(id), {}};
            for (int j = 1; j <= c.dim; ++j)
                for (int i = 0; i < j; ++i)
                    if (c.dim >= 2 && !(face(face(x, j), i) == face(face(x, i), j - 1)))
                        throw Error("bad_simplicial_set", c.name + ": d_" + std::to_string(i) + " d_" +
                                                              std::to_string(j) + " != d_" + std::to_string(j - 1) +
                                                              " d_" + std::to_string(i));
        }
    }

private:
    std::vector<Cell> cells_;
    std::vector<std::vector<int>> by_dim_;
    std::vector<int> index_in_dim_;
};

inline Simplex nondeg(int cell) { return {cell, {}}; }

namespace models {

inline SimplicialSetModel point()
{
    SimplicialSetModel x;
    x.add_cell("v", 0);
    return x;
}

// one vertex with k loops
inline SimplicialSetModel wedge_of_circles(std::size_t k)
{
    SimplicialSetModel x;
    int v = x.add_cell("v", 0);
    for (std::size_t i = 0; i < k; ++i)
        x.add_cell("e" + std::to_string(i + 1), 1, {nondeg(v), nondeg(v)});
    return x;
}

inline SimplicialSetModel circle() { return wedge_of_circles(1); }

// Two triangles U = (a then b, diagonal c) and L = (b then a, diagonal c).
inline SimplicialSetModel torus()
{
    SimplicialSetModel x;
    int v = x.add_cell("v", 0);
    int a = x.add_cell("a", 1, {nondeg(v), nondeg(v)});
    int b = x.add_cell("b", 1, {nondeg(v), nondeg(v)});
    int c = x.add_cell("c", 1, {nondeg(v), nondeg(v)});
    x.add_cell("U", 2, {nondeg(b), nondeg(c), nondeg(a)});
    x.add_cell("L", 2, {nondeg(a), nondeg(c), nondeg(b)});
    x.validate();
    return x;
}

// one edge a and one triangle with boundary a a (third side degenerate)
inline SimplicialSetModel projective_plane()
{
    SimplicialSetModel x;
    int v = x.add_cell("v", 0);
    int a = x.add_cell("a", 1, {nondeg(v), nondeg(v)});
    x.add_cell("t", 2, {nondeg(a), Simplex{v, {0}}, nondeg(a)});
    x.validate();
    return x;
}

// Wedge of k circles plus an edge c and a triangle whose faces are
// (c, e1, degenerate): the triangle collapses c onto e1, so the result is
// homotopy equivalent to the plain wedge.
inline SimplicialSetModel wedge_with_collapsible_triangle(std::size_t k)
{
    if (k < 1)
        throw Error("domain", "need at least one circle");
    SimplicialSetModel x = wedge_of_circles(k);
    int v = x.base_vertex();
    int e1 = *x.find("e1");
    int c = x.add_cell("c", 1, {nondeg(v), nondeg(v)});
    x.add_cell("t", 2, {nondeg(c), nondeg(e1), Simplex{v, {0}}});
    x.validate();
    return x;
}

} // namespace models

// Normalized cochains C^d = functions on nondegenerate d-simplices, for
// d <= maxdeg. Basis element delta_x is the indicator of the cell x.
inline FiniteDGA cochain_algebra(const SimplicialSetModel& X, int maxdeg = 2)
{
    if (maxdeg < 2)
        throw Error("domain", "cochain_algebra keeps at least degrees 0..2");
    X.validate();
    const Ring ring = Ring::integers();
    {
        std::vector<std::vector<std::string>> labels(static_cast<std::size_t>(maxdeg) + 1);
        for (int d = 0; d <= maxdeg; ++d)
            for (int id : X.cells_of_dim(d))
                labels[static_cast<std::size_t>(d)].push_back(X.cell(id).name);
        FiniteDGA A(ring, std::move(labels));
        A.set_truncated(X.top_dimension() > maxdeg);
        for (int d = 0; d < maxdeg; ++d) {
            IntMatrix m(ring, A.dim(d + 1), A.dim(d));
            for (int id : X.cells_of_dim(d + 1))
                for (int i = 0; i <= d + 1; ++i) {
                    Simplex f = X.face(nondeg(id), i);
                    if (!f.degenerate())
                        m.add_to(static_cast<std::size_t>(X.index_in_dim(id)), static_cast<std::size_t>(X.index_in_dim(f.cell)),
                                 Scalar(i % 2 ? -1 : 1));
                }
            A.set_differential(d, std::move(m));
        }
        // (delta_y u delta_z)(x) = [front_p x = y][back_q x = z]
        std::map<std::pair<BasisRef, BasisRef>, Combination> table;
        for (int n = 0; n <= std::min(maxdeg, X.top_dimension()); ++n)
            for (int id : X.cells_of_dim(n))
                for (int p = 0; p <= n; ++p) {
                    Simplex y = X.front(nondeg(id), p), z = X.back(nondeg(id), n - p);
                    if (y.degenerate() || z.degenerate())
                        continue;
                    table[{BasisRef{p, X.index_in_dim(y.cell)}, BasisRef{n - p, X.index_in_dim(z.cell)}}][X.index_in_dim(id)] += 1;
                }
        for (auto& [key, comb] : table)
            A.set_product(key.first, key.second, std::move(comb));
        A.set_unit(FiniteDGA::Vec(A.dim(0), Scalar(1)));
        FiniteDGA::Vec aug(A.dim(0), Scalar(0));
        aug[static_cast<std::size_t>(X.index_in_dim(X.base_vertex()))] = 1;
        A.set_augmentation(std::move(aug));
        return A;
    }
}

// Reduces integral cochains to another coefficient ring.
inline FiniteDGA change_ring(const FiniteDGA& A, const Ring& ring)
{
    std::vector<std::vector<std::string>> labels;
    for (int d = 0; d <= A.max_degree(); ++d)
        labels.push_back(A.labels(d));
    FiniteDGA B(ring, std::move(labels));
    B.set_truncated(A.truncated());
    for (int d = 0; d < A.max_degree(); ++d)
        B.set_differential(d, IntMatrix(ring, A.dim(d + 1), A.dim(d), A.differential(d).entries()));
    for (const auto& [key, comb] : A.products())
        B.set_product(key.first, key.second, comb);
    auto norm = [&](FiniteDGA::Vec v) {
        for (auto& e : v)
            e = ring.normalize(e);
        return v;
    };
    B.set_unit(norm(A.unit()));
    B.set_augmentation(norm(A.augmentation()));
    return B;
}

inline FiniteDGA cochain_algebra(const SimplicialSetModel& X, const Ring& ring, int maxdeg = 2)
{
    return change_ring(cochain_algebra(X, maxdeg), ring);
}

// R[e_s : s in S]/(e_s e_t), e_s in degree 1, zero differential.
inline FiniteDGA wedge_algebra(const GenSet& S, const Ring& ring)
{
    FiniteDGA A(ring, {{"1"}, S.names()});
    A.set_product({0, 0}, {0, 0}, {{0, Scalar(1)}});
    for (int i = 0; i < static_cast<int>(S.size()); ++i) {
        A.set_product({0, 0}, {1, i}, {{i, Scalar(1)}});
        A.set_product({1, i}, {0, 0}, {{i, Scalar(1)}});
    }
    A.set_unit({Scalar(1)});
    A.set_augmentation({Scalar(1)});
    return A;
}

struct DgaReport {
    std::vector<std::string> violations;
    bool ok() const noexcept { return violations.empty(); }
    std::string summary() const
    {
        if (ok())
            return "ok";
        std::string s;
        for (const auto& v : violations)
            s += v + "\n";
        return s;
    }
};

// Checks every axiom exhaustively over basis elements (pairs and triples);
// only the first witness per axiom is reported.
inline DgaReport verify_dga(const FiniteDGA& A)
{
    DgaReport rep;
    const Ring& R = A.ring();
    const int top = A.max_degree();
    auto is_zero = [](const FiniteDGA::Vec& v) {
        return std::all_of(v.begin(), v.end(), [](const Scalar& e) { return e == 0; });
    };
    auto sub = [&](FiniteDGA::Vec a, const FiniteDGA::Vec& b) {
        for (std::size_t i = 0; i < a.size(); ++i)
            a[i] = R.sub(a[i], b[i]);
        return a;
    };
    auto name = [&](BasisRef b) { return A.label(b) + "(deg " + std::to_string(b.degree) + ")"; };
    std::vector<BasisRef> basis;
    for (int d = 0; d <= top; ++d)
        for (std::size_t i = 0; i < A.dim(d); ++i)
            basis.push_back({d, static_cast<int>(i)});

    for (int d = 0; d + 2 <= top; ++d)
        if (!(A.differential(d + 1) * A.differential(d)).is_zero()) {
            rep.violations.push_back("d^2 != 0 on C^" + std::to_string(d));
            break;
        }

    [&] {
        for (auto a : basis) {
            auto u = A.multiply(0, A.unit(), a.degree, A.basis_vector(a));
            auto v = A.multiply(a.degree, A.basis_vector(a), 0, A.unit());
            if (u != A.basis_vector(a) || v != A.basis_vector(a)) {
                rep.violations.push_back("unit: 1*x != x or x*1 != x for x = " + name(a));
                return;
            }
        }
    }();

    [&] {
        for (auto a : basis)
            for (auto b : basis)
                for (auto c : basis) {
                    int p = a.degree, q = b.degree, r = c.degree;
                    if (p + q + r > top)
                        continue;
                    auto ab = A.multiply(p, A.basis_vector(a), q, A.basis_vector(b));
                    auto bc = A.multiply(q, A.basis_vector(b), r, A.basis_vector(c));
                    if (A.multiply(p + q, ab, r, A.basis_vector(c)) != A.multiply(p, A.basis_vector(a), q + r, bc)) {
                        rep.violations.push_back("associativity fails on (" + name(a) + ", " + name(b) + ", " + name(c) + ")");
                        return;
                    }
                }
    }();

    [&] {
        for (auto a : basis)
            for (auto b : basis) {
                int p = a.degree, q = b.degree;
                if (p + q + 1 > top)
                    continue;
                auto x = A.basis_vector(a), y = A.basis_vector(b);
                auto lhs = A.apply_d(p + q, A.multiply(p, x, q, y));
                auto r1 = A.multiply(p + 1, A.apply_d(p, x), q, y);
                auto r2 = A.multiply(p, x, q + 1, A.apply_d(q, y));
                FiniteDGA::Vec rhs(lhs.size());
                for (std::size_t i = 0; i < rhs.size(); ++i)
                    rhs[i] = (p % 2) ? R.sub(r1[i], r2[i]) : R.add(r1[i], r2[i]);
                if (!is_zero(sub(lhs, rhs))) {
                    rep.violations.push_back("Leibniz fails on (" + name(a) + ", " + name(b) + ")");
                    return;
                }
            }
    }();

    [&] {
        Scalar au = 0;
        for (std::size_t i = 0; i < A.dim(0); ++i)
            au = R.add(au, A.augmentation()[i] * A.unit()[i]);
        if (au != 1) {
            rep.violations.push_back("augmentation: aug(1) != 1");
            return;
        }
        auto aug = [&](const FiniteDGA::Vec& v) {
            Scalar s = 0;
            for (std::size_t i = 0; i < v.size(); ++i)
                s = R.add(s, A.augmentation()[i] * v[i]);
            return s;
        };
        for (std::size_t i = 0; i < A.dim(0); ++i)
            for (std::size_t j = 0; j < A.dim(0); ++j) {
                BasisRef a{0, static_cast<int>(i)}, b{0, static_cast<int>(j)};
                auto ab = A.multiply(0, A.basis_vector(a), 0, A.basis_vector(b));
                if (aug(ab) != R.mul(A.augmentation()[i], A.augmentation()[j])) {
                    rep.violations.push_back("augmentation is not multiplicative on (" + name(a) + ", " + name(b) + ")");
                    return;
                }
            }
    }();
    return rep;
}

// The presentation read off the 2-skeleton of a one-vertex model: edges are
// generators, each triangle t gives the relator d_2(t) d_0(t) d_1(t)^{-1},
// degenerate edges contributing the identity.
inline Presentation presentation_of(const SimplicialSetModel& X)
{
    X.validate();
    if (X.vertex_count() != 1)
        throw Error("not_connected_algebra", "presentation_of needs a single vertex");
    std::vector<std::string> names;
    for (int id : X.cells_of_dim(1))
        names.push_back(X.cell(id).name);
    Presentation P;
    P.gens = GenSet(names);
    auto edge = [&](const Simplex& f) {
        return f.degenerate() ? Word() : Word::generator(X.index_in_dim(f.cell));
    };
    for (int id : X.cells_of_dim(2)) {
        Word r = edge(X.face(nondeg(id), 2)) * edge(X.face(nondeg(id), 0)) * edge(X.face(nondeg(id), 1)).inverse();
        if (r.is_identity())
            P.warnings.push_back(X.cell(id).name + ": trivial relator dropped");
        else
            P.relators.push_back(std::move(r));
    }
    return P;
}

} // namespace lbraid
