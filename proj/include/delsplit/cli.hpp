// Command-line front end. Exit codes: 0 P-position / success, 10 N-position,
// 2 invalid invocation, 3 verification found a mismatch.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace delsplit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitMismatch = 3;
inline constexpr int kExitN = 10;

/// Heap list separated by commas and/or whitespace. Throws Error(ParseError).
std::vector<std::int64_t> parse_heaps(std::string_view text);

int cmd_classify(const std::string& ruleset, const std::string& heaps, std::ostream& out, std::ostream& err);

int cmd_best_move(const std::string& ruleset, const std::string& heaps, std::ostream& out, std::ostream& err);

struct VerifyArgs {
        std::string ruleset;
        std::int64_t max_heap = 0;
        std::string out_path; // empty: no report file
        std::string format = "csv";
        unsigned jobs = 1;
        std::int64_t token_limit = 96;
};

int cmd_verify(const VerifyArgs& args, std::ostream& out, std::ostream& err);

int cmd_grundy_table(const std::string& ruleset, std::int64_t max_heap, std::int64_t token_limit, std::ostream& out,
                     std::ostream& err);

/// Default sweep parallelism: DELSPLIT_JOBS if set and positive, else 1.
unsigned default_jobs();

/// Full argument parsing and dispatch, including `serve`.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

} // namespace delsplit::cli
