#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace ftlab::acceptance {

struct Result {
    int id;
    std::string title;
    std::string claim;  // the identity under test, used as provenance key
    bool pass;
    std::string detail;
    double seconds;
};

struct Options {
    std::uint64_t seed = 20261018;
    // subset of criteria to run; empty means all
    std::vector<int> only;
};

constexpr int criterion_count = 13;

// Runs the criteria in order, printing one line per criterion to `log` as it finishes.
std::vector<Result> run(const Options& opt, std::ostream& log);
std::string format_line(const Result& r);

}  // namespace ftlab::acceptance
