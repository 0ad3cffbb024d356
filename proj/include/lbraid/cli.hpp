#pragma once

// Command dispatch for the lbraid tool. Parsing argv lives in the tool; this
// header holds the verbs so they can be driven from tests.
//
// Exit status: 0 success, 1 input error, 2 verification failure.

#include <cstdint>
#include <cstdlib>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "lbraid/barcyc.hpp"
#include "lbraid/braiding.hpp"
#include "lbraid/classfun.hpp"
#include "lbraid/coeff.hpp"
#include "lbraid/dga.hpp"
#include "lbraid/error.hpp"
#include "lbraid/freegroup.hpp"
#include "lbraid/io.hpp"

namespace lbraid::cli {

inline constexpr int kDefaultMaxWeight = 6;

enum Status : int { ok = 0, input_error = 1, verification_failure = 2 };

struct Command {
    std::string verb; // eval, basis, cyc-h0, bar-h0, verify, oracle-compare
    std::string ring; // empty: take it from the input where possible, else Z
    int n = 2;
    std::string tensor, word, presentation, space, basis, output;
    bool class_functions = false;
    SampleBounds bounds;
    std::size_t max_length = 10; // oracle word length search limit
};

namespace detail {

inline int max_weight()
{
    const char* env = std::getenv("LB_MAX_WEIGHT");
    if (!env || !*env)
        return kDefaultMaxWeight;
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 0)
        throw Error("usage", std::string("LB_MAX_WEIGHT must be a nonnegative integer, got '") + env + "'");
    return static_cast<int>(v);
}

inline void require(const std::string& value, const char* flag, const std::string& verb)
{
    if (value.empty())
        throw Error("usage", verb + " needs " + flag);
}

inline Ring ring_of(const Command& cmd) { return Ring::parse(cmd.ring.empty() ? "Z" : cmd.ring); }

inline std::string list(const std::vector<std::size_t>& v)
{
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? "," : "") + std::to_string(v[i]);
    return s + "]";
}

inline std::size_t sum(const std::vector<std::size_t>& v)
{
    std::size_t t = 0;
    for (auto x : v)
        t += x;
    return t;
}

inline void emit(const Command& cmd, const Json& j)
{
    if (!cmd.output.empty())
        write_file(cmd.output, j.dump(2) + "\n");
}

inline void print_ranks(std::ostream& out, const std::vector<std::size_t>& ranks)
{
    out << "ranks_per_weight: " << list(ranks) << "\n";
    out << "rank: " << sum(ranks) << "\n";
}

inline int do_eval(const Command& cmd, std::ostream& out)
{
    require(cmd.tensor, "--tensor", cmd.verb);
    auto t = read_tensor(cmd.tensor);
    if (!cmd.ring.empty() && !(Ring::parse(cmd.ring) == t.ring()))
        throw Error("ring", cmd.tensor + ": tensor is over " + t.ring().name() + ", not " + cmd.ring);
    Word w;
    try {
        w = parse_word(cmd.word, t.gens());
    } catch (const Error& e) {
        throw Error(e.code(), "--word: " + e.message());
    }
    out << eval_word(t, w).str() << "\n";
    return ok;
}

inline int do_basis(const Command& cmd, std::ostream& out)
{
    Ring ring = ring_of(cmd);
    TensorBasis B;
    if (!cmd.presentation.empty()) {
        auto P = read_presentation(cmd.presentation);
        B = cmd.class_functions ? class_function_basis(P, cmd.n, ring) : finite_type_basis(P, cmd.n, ring);
    } else {
        require(cmd.space, "--presentation or --space", cmd.verb);
        auto X = read_simplicial_set(cmd.space);
        B = cmd.class_functions ? class_function_basis(X, cmd.n, ring) : finite_type_basis(X, cmd.n, ring);
    }
    out << "kind: " << B.kind << "\n";
    print_ranks(out, B.ranks_per_weight);
    emit(cmd, basis_to_json(B));
    return ok;
}

inline int do_h0(const Command& cmd, std::ostream& out, bool cyclic)
{
    require(cmd.space, "--space", cmd.verb);
    auto X = read_simplicial_set(cmd.space);
    auto A = std::make_shared<const FiniteDGA>(cochain_algebra(X, ring_of(cmd), 2));
    auto h = cyclic ? h0_cyc(A, cmd.n) : h0_bar(A, cmd.n);
    print_ranks(out, h.ranks_per_weight);
    if (!cmd.output.empty()) {
        TensorBasis B;
        B.ring = A->ring();
        B.gens = generator_set(*A);
        B.n = cmd.n;
        B.kind = cyclic ? "cyc_h0" : "bar_h0";
        B.weights = h.weights;
        B.ranks_per_weight = h.ranks_per_weight;
        B.annihilators = h.annihilators;
        for (const auto& x : h.basis)
            B.tensors.push_back(to_tensor(x, B.gens));
        emit(cmd, basis_to_json(B));
    }
    return ok;
}

// All m0[a_1|..|a_k] of Cyc(A; A) with k <= max_len, a_i of positive degree.
inline std::vector<CycElement> cyc_basis_elements(const std::shared_ptr<const FiniteDGA>& A, int max_len)
{
    std::vector<BasisRef> all, reduced;
    for (int d = 0; d <= A->max_degree(); ++d)
        for (int i = 0; i < static_cast<int>(A->dim(d)); ++i) {
            all.push_back({d, i});
            if (d > 0)
                reduced.push_back({d, i});
        }
    std::vector<BarSequence> seqs{{}};
    for (std::size_t begin = 0, len = 1; len <= static_cast<std::size_t>(max_len); ++len) {
        std::size_t end = seqs.size();
        for (std::size_t i = begin; i < end; ++i)
            for (const auto& b : reduced) {
                auto s = seqs[i];
                s.push_back(b);
                seqs.push_back(std::move(s));
            }
        begin = end;
    }
    std::vector<CycElement> out;
    for (const auto& m0 : all)
        for (const auto& s : seqs) {
            CycElement x(A, CycModule::A);
            x.add_term(m0, s, Scalar(1));
            out.push_back(std::move(x));
        }
    return out;
}

inline int do_verify(const Command& cmd, std::ostream& out)
{
    bool good = true;
    if (!cmd.space.empty()) {
        auto X = read_simplicial_set(cmd.space);
        auto A = std::make_shared<const FiniteDGA>(cochain_algebra(X, ring_of(cmd), 2));
        auto rep = verify_dga(*A);
        out << "dga axioms: " << (rep.ok() ? "ok" : "FAILED") << "\n";
        if (!rep.ok())
            out << rep.summary() << "\n";
        good = good && rep.ok();
        if (A->is_connected()) {
            std::size_t checked = 0, bad = 0;
            for (const auto& x : cyc_basis_elements(A, std::min(cmd.n, 2))) {
                ++checked;
                bad += !cyc_differential(cyc_differential(x)).is_zero();
            }
            out << "cyclic d^2 = 0: " << (bad ? "FAILED" : "ok") << " (" << checked << " basis elements)\n";
            good = good && bad == 0;
        }
    }
    if (!cmd.basis.empty()) {
        require(cmd.presentation, "--presentation (with --basis)", cmd.verb);
        auto P = read_presentation(cmd.presentation);
        auto B = basis_from_json(parse_json(read_file(cmd.basis), cmd.basis), cmd.basis);
        if (!(B.gens == P.gens))
            throw Error("gen_mismatch", cmd.basis + ": generators differ from " + cmd.presentation);
        const bool cyclic = B.kind == "class" || B.kind == "cyc_h0";
        std::size_t failed = 0;
        for (std::size_t i = 0; i < B.rank(); ++i) {
            bool pass = satisfies_conditions(B.tensors[i], P, B.n, cyclic);
            std::string witness;
            if (pass && cyclic) {
                auto v = is_class_function_sampled(B.tensors[i], P, cmd.bounds);
                pass = v.pass;
                witness = v.witness;
            }
            if (!pass) {
                ++failed;
                out << "tensor " << i << ": FAILED" << (witness.empty() ? "" : " (" + witness + ")") << "\n";
            }
        }
        out << "basis members: " << (failed ? "FAILED" : "ok") << " (" << B.rank() - failed << "/" << B.rank()
            << " pass)\n";
        good = good && failed == 0;
    }
    if (cmd.space.empty() && cmd.basis.empty())
        throw Error("usage", "verify needs --space or --basis");
    return good ? ok : verification_failure;
}

inline int do_oracle_compare(const Command& cmd, std::ostream& out)
{
    require(cmd.presentation, "--presentation", cmd.verb);
    auto P = read_presentation(cmd.presentation);
    Ring ring = ring_of(cmd);
    auto B = cmd.class_functions ? class_function_basis(P, cmd.n, ring) : finite_type_basis(P, cmd.n, ring);
    auto o = oracle_search(P, cmd.n, ring, cmd.class_functions, cmd.max_length);
    bool good = true;
    out << "type  basis  oracle\n";
    std::size_t acc = 0;
    for (int k = 0; k <= cmd.n; ++k) {
        acc += B.ranks_per_weight.at(static_cast<std::size_t>(k));
        std::size_t ok_rank = o.ranks.at(static_cast<std::size_t>(k));
        out << k << "     " << acc << "      " << ok_rank << (acc == ok_rank ? "" : "   MISMATCH") << "\n";
        good = good && acc == ok_rank;
    }
    IntMatrix mine = pairing_table(B, o.core_words);
    std::size_t diffs = 0;
    if (mine.rows() != o.pairing.rows())
        diffs = std::max(mine.rows(), o.pairing.rows()) * o.core_words.size();
    else
        for (std::size_t i = 0; i < mine.rows(); ++i)
            for (std::size_t j = 0; j < mine.cols(); ++j)
                diffs += mine(i, j) != o.pairing(i, j);
    out << "pairing: " << (diffs ? std::to_string(diffs) + " entries differ" : "agree") << " ("
        << o.core_words.size() << " words, " << o.classes << " group elements enumerated)\n";
    good = good && diffs == 0;
    return good ? ok : verification_failure;
}

} // namespace detail

inline int run(const Command& cmd, std::ostream& out, std::ostream& err)
{
    try {
        int cap = detail::max_weight();
        if (cmd.n < 0)
            throw Error("usage", "-n must be nonnegative");
        if (cmd.n > cap)
            throw Error("usage", "weight bound " + std::to_string(cmd.n) + " exceeds LB_MAX_WEIGHT=" +
                                     std::to_string(cap));
        if (cmd.verb == "eval")
            return detail::do_eval(cmd, out);
        if (cmd.verb == "basis")
            return detail::do_basis(cmd, out);
        if (cmd.verb == "cyc-h0")
            return detail::do_h0(cmd, out, true);
        if (cmd.verb == "bar-h0")
            return detail::do_h0(cmd, out, false);
        if (cmd.verb == "verify")
            return detail::do_verify(cmd, out);
        if (cmd.verb == "oracle-compare")
            return detail::do_oracle_compare(cmd, out);
        throw Error("usage", "unknown command '" + cmd.verb + "'");
    } catch (const std::exception& e) {
        err << "lbraid: " << e.what() << "\n";
        return input_error;
    }
}

} // namespace lbraid::cli
