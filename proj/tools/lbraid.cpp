#include <iostream>
#include <string>
#include <utility>

#include <CLI11.hpp>

#include "lbraid/cli.hpp"

namespace {

void add_common(CLI::App* sub, lbraid::cli::Command& cmd)
{
    sub->add_option("--ring", cmd.ring, "coefficient ring: Z, Q or Z/m");
    sub->add_option("-n", cmd.n, "weight bound")->capture_default_str();
    sub->add_option("-o,--output", cmd.output, "write the resulting basis file here");
}

} // namespace

int main(int argc, char** argv)
{
    using lbraid::cli::Command;
    Command cmd;
    CLI::App app{"Letter braiding invariants, finite-type class functions and cyclic bar H^0"};
    app.require_subcommand(1);

    auto* eval = app.add_subcommand("eval", "evaluate a tensor on a word");
    add_common(eval, cmd);
    eval->add_option("--tensor", cmd.tensor, "tensor file")->required();
    eval->add_option("--word", cmd.word, "word, e.g. \"a b a^-1\"")->required();

    auto* basis = app.add_subcommand("basis", "finite-type function or class function basis");
    add_common(basis, cmd);
    basis->add_option("--presentation", cmd.presentation, "presentation file");
    basis->add_option("--space", cmd.space, "simplicial set file (one vertex)");
    basis->add_flag("--class", cmd.class_functions, "restrict to class functions");

    for (auto [verb, what] : {std::pair{"cyc-h0", "weight-filtered H^0 of the cyclic bar construction"},
                              std::pair{"bar-h0", "weight-filtered H^0 of the bar construction"}}) {
        auto* h = app.add_subcommand(verb, what);
        add_common(h, cmd);
        h->add_option("--space", cmd.space, "simplicial set file")->required();
    }

    auto* verify = app.add_subcommand("verify", "check dga axioms, d^2 = 0, or a basis file");
    add_common(verify, cmd);
    verify->add_option("--space", cmd.space, "simplicial set file");
    verify->add_option("--basis", cmd.basis, "basis file to re-verify");
    verify->add_option("--presentation", cmd.presentation, "presentation the basis file belongs to");
    verify->add_option("--seed", cmd.bounds.seed, "seed for sampled checks")->capture_default_str();
    verify->add_option("--sample-length", cmd.bounds.word_length, "longest sampled word")->capture_default_str();
    verify->add_option("--sample-pairs", cmd.bounds.random_pairs, "random conjugation samples")
        ->capture_default_str();

    auto* oracle = app.add_subcommand("oracle-compare", "compare a basis against the group-ring oracle");
    add_common(oracle, cmd);
    oracle->add_option("--presentation", cmd.presentation, "presentation file")->required();
    oracle->add_flag("--class", cmd.class_functions, "compare class functions");
    oracle->add_option("--max-length", cmd.max_length, "longest enumerated word")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : lbraid::cli::input_error;
    }
    cmd.verb = app.get_subcommands().front()->get_name();
    return lbraid::cli::run(cmd, std::cout, std::cerr);
}
