#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace mapfunc::cli {

//! Process exit codes.
enum Exit : int {
    ok = 0,
    usage = 1,
    runtime = 2,
    check_failed = 3,
    divergent = 10,
    no_root = 11,
    not_subexp = 12,
    inconclusive = 20,
};

struct Options {
    std::filesystem::path model;
    std::optional<std::filesystem::path> out;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> n;
    std::optional<double> grid;
    //! survival window "shallow,deep"
    std::optional<std::string> window;
    std::optional<std::filesystem::path> samples;
    bool force = false;
    bool diagnose = false;
    bool corruptC = false;
    int threads = 0;
};

int cmd_describe(const Options& opt, std::ostream& out, std::ostream& err);
int cmd_classify(const Options& opt, std::ostream& out, std::ostream& err);
int cmd_simulate(const Options& opt, std::ostream& out, std::ostream& err);
int cmd_cramer(const Options& opt, std::ostream& out, std::ostream& err);
int cmd_subexp(const Options& opt, std::ostream& out, std::ostream& err);
int cmd_checks(const Options& opt, std::ostream& out, std::ostream& err);

}  // namespace mapfunc::cli
