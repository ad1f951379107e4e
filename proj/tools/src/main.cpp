#include <iostream>

#include <CLI11.hpp>

#include <mapfunc/error.hpp>

#include "commands.hpp"

namespace {

using mapfunc::cli::Options;

int exit_for(const mapfunc::Error& e)
{
    using mapfunc::ErrorCode;
    namespace ex = mapfunc::cli;
    switch (e.code()) {
        case ErrorCode::InvalidArgument:
        case ErrorCode::ParseError:
        case ErrorCode::IoError: return ex::Exit::usage;
        case ErrorCode::PositiveDrift:
        case ErrorCode::NotConvergent: return ex::Exit::divergent;
        case ErrorCode::NotOfType: return ex::Exit::not_subexp;
        default: return ex::Exit::runtime;
    }
}

void add_common(CLI::App* sub, Options& opt)
{
    sub->add_option("--model", opt.model, "Model file")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", opt.seed, "Master seed; drawn at random and recorded when absent");
    sub->add_option("--threads", opt.threads, "Worker threads; falls back to MAPFUNC_THREADS, then 1");
    sub->add_option("--grid", opt.grid, "Brownian discretization step h");
    sub->add_option("--out", opt.out, "Output directory");
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Exponential functionals of two-state Lamperti-Kiu processes", "mapfunc"};
    app.require_subcommand(1);
    Options opt;

    auto* describe = app.add_subcommand("describe", "Print drift, transform domains and the lambda scan");
    describe->add_option("--model", opt.model, "Model file")->required()->check(CLI::ExistingFile);

    auto* classify = app.add_subcommand("classify", "Classify convergence of A_inf");
    add_common(classify, opt);
    classify->add_option("--n", opt.n, "xi_T2 samples used when K is undefined");

    auto* simulate = app.add_subcommand("simulate", "Sample A_inf and B_inf");
    add_common(simulate, opt);
    simulate->add_option("--n", opt.n, "Number of coupled draws");
    simulate->add_flag("--force", opt.force, "Sample even when the model is classified divergent");

    auto* cramer = app.add_subcommand("cramer", "Cramér root and Kesten tail constants");
    add_common(cramer, opt);
    cramer->add_option("--n", opt.n, "Draws when no samples file is given");
    cramer->add_option("--samples", opt.samples, "Existing A_inf samples")->check(CLI::ExistingFile);
    cramer->add_option("--window", opt.window, "Survival window shallow,deep");

    auto* subexp = app.add_subcommand("subexp", "Subexponential tail prediction against simulation");
    add_common(subexp, opt);
    subexp->add_option("--n", opt.n, "Number of A_inf draws");
    subexp->add_flag("--diagnose", opt.diagnose, "Attach excursion statistics");

    auto* checks = app.add_subcommand("checks", "Lemma-level property checks");
    add_common(checks, opt);
    checks->add_option("--n", opt.n, "Monte Carlo size per check");
    checks->add_flag("--corrupt-c", opt.corruptC, "Halve C in the log A bound (negative control)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int const rc = app.exit(e);
        return rc == 0 ? 0 : mapfunc::cli::Exit::usage;
    }

    try {
        if (*describe)
            return mapfunc::cli::cmd_describe(opt, std::cout, std::cerr);
        if (*classify)
            return mapfunc::cli::cmd_classify(opt, std::cout, std::cerr);
        if (*simulate)
            return mapfunc::cli::cmd_simulate(opt, std::cout, std::cerr);
        if (*cramer)
            return mapfunc::cli::cmd_cramer(opt, std::cout, std::cerr);
        if (*subexp)
            return mapfunc::cli::cmd_subexp(opt, std::cout, std::cerr);
        if (*checks)
            return mapfunc::cli::cmd_checks(opt, std::cout, std::cerr);
    } catch (const mapfunc::Error& e) {
        std::cerr << "mapfunc: " << e.what() << "\n";
        return exit_for(e);
    } catch (const std::exception& e) {
        std::cerr << "mapfunc: " << e.what() << "\n";
        return mapfunc::cli::Exit::runtime;
    }
    return mapfunc::cli::Exit::usage;
}
