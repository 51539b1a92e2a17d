// Command-line surface: validate / moments / spectrum / classify / proptest.
// Exit codes: 0 success, 1 tolerance failure, 2 input error.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "tomitafock/driver.hpp"

namespace {

using tomitafock::RunConfig;

void add_common(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--category", cfg.category,
                    "catalog name (trivial|fib|ising|zmod:n|zwindow:n) or JSON file path");
    cmd->add_option("--lambda", cfg.lambda_spec,
                    "λ assignment: uniform:x | geometric:x | label=value,... "
                    "(values are rationals like 2 or 1/2, or decimals)");
    cmd->add_option("--depth", cfg.depth, "Fock truncation depth N");
    cmd->add_option("--order", cfg.moment_order, "moment order K");
    cmd->add_option("--seed", cfg.seed, "RNG seed for sampled suites");
    cmd->add_option("--tol-moments", cfg.tol_moments, "moment comparison tolerance");
    cmd->add_option("--tol-structural", cfg.tol_structural, "structural identity tolerance");
    cmd->add_option("--tol-spectrum", cfg.tol_spectrum, "spectrum moment tolerance");
    cmd->add_option("--basis-cap", cfg.basis_cap, "max number of Fock basis paths");
    cmd->add_option("--format", cfg.format, "output format: json|csv")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--threads", cfg.threads,
                    "parallel suites (0 = auto, capped by TOMITA_FOCK_THREADS)");
    cmd->add_option("--words", cfg.words_per_model, "oracle-equivalence words per model");
    cmd->add_option("--hist-bins", cfg.hist_bins, "histogram bin count");
    cmd->add_option("--hist-dim", cfg.hist_dim_cap, "histogram matrix dimension cap");
}

int with_output(const RunConfig& cfg, const std::string& path,
                const std::function<int(std::ostream&)>& body) {
    if (path.empty()) return body(std::cout);
    std::ofstream out(path);
    if (!out) throw tomitafock::InputError("cannot open output file '" + path + "'");
    return body(out);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-truncation Fock-space models built from fusion-category data: "
                 "moment cross-checks, modular flow, freeness and factor-type classification"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string word_text, xi_text, output_path;

    CLI::App* validate = app.add_subcommand("validate", "validate category data and dimensions");
    add_common(validate, cfg);
    validate->add_option("--output", output_path, "write result to file instead of stdout");

    CLI::App* moments = app.add_subcommand(
        "moments", "evaluate one word: truncated-operator value vs pairing-formula value.\n"
                   "Word grammar: items in application order; 'g:<src>,<dst>,<letter>,<idx>' "
                   "(letter 'x' or barred 'x~'), 's(item)' for the S-conjugated generator, "
                   "'(...)^k' repetition, 'g*2.5' scaling; bare 'g' = g:1,1,1,0");
    add_common(moments, cfg);
    moments->add_option("--word", word_text, "word to evaluate")->required();
    moments->add_option("--output", output_path, "write result to file instead of stdout");

    CLI::App* spectrum = app.add_subcommand(
        "spectrum", "moments of Γ(ξ)*Γ(ξ) vs the closed-form law, plus an APPROXIMATE "
                    "eigenvalue histogram of the truncated compression");
    add_common(spectrum, cfg);
    spectrum->add_option("--xi", xi_text, "generator 'src,dst,letter,idx'")->required();
    spectrum->add_option("--output", output_path, "write result to file instead of stdout");

    CLI::App* classify = app.add_subcommand("classify", "semifiniteness and factor type report");
    add_common(classify, cfg);
    classify->add_option("--output", output_path, "write result to file instead of stdout");

    CLI::App* proptest = app.add_subcommand(
        "proptest", "run all invariant suites over the built-in catalog");
    add_common(proptest, cfg);
    proptest->add_option("--output", output_path, "write result to file instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (validate->parsed())
            return with_output(cfg, output_path, [&](std::ostream& o) { return cmd_validate(cfg, o); });
        if (moments->parsed())
            return with_output(cfg, output_path,
                               [&](std::ostream& o) { return cmd_moments(cfg, word_text, o); });
        if (spectrum->parsed())
            return with_output(cfg, output_path,
                               [&](std::ostream& o) { return cmd_spectrum(cfg, xi_text, o); });
        if (classify->parsed())
            return with_output(cfg, output_path, [&](std::ostream& o) { return cmd_classify(cfg, o); });
        if (proptest->parsed())
            return with_output(cfg, output_path, [&](std::ostream& o) { return cmd_proptest(cfg, o); });
    } catch (const tomitafock::InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const tomitafock::ToleranceError& e) {
        std::cerr << "tolerance failure: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
