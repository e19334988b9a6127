#include "delsplit/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "delsplit/classifier.hpp"
#include "delsplit/game.hpp"
#include "delsplit/oracle.hpp"
#include "delsplit/service.hpp"
#include "delsplit/strategy.hpp"

namespace delsplit::cli {

std::vector<std::int64_t> parse_heaps(std::string_view text)
{
        std::vector<std::int64_t> heaps;
        std::size_t i = 0;
        auto is_sep = [](char c) { return c == ',' || c == ' ' || c == '\t' || c == '\n'; };
        while (i < text.size()) {
                while (i < text.size() && is_sep(text[i]))
                        ++i;
                if (i == text.size())
                        break;
                std::size_t j = i;
                while (j < text.size() && !is_sep(text[j]))
                        ++j;
                std::int64_t value = 0;
                auto [ptr, ec] = std::from_chars(text.data() + i, text.data() + j, value);
                if (ec != std::errc{} || ptr != text.data() + j)
                        throw Error(Errc::ParseError, "bad heap size '" + std::string(text.substr(i, j - i)) + "'");
                heaps.push_back(value);
                i = j;
        }
        if (heaps.empty())
                throw Error(Errc::ParseError, "no heap sizes given");
        return heaps;
}

namespace {

Position position_arg(const Ruleset& rules, const std::string& heaps)
{
        return Position::canonicalize(parse_heaps(heaps), rules);
}

int usage_error(std::ostream& err, const Error& e)
{
        err << "error (" << to_string(e.code()) << "): " << e.what() << '\n';
        return kExitUsage;
}

Heap bound_arg(std::int64_t value, const char* name)
{
        if (value < 0)
                throw Error(Errc::DomainError, std::string(name) + " must be non-negative");
        return static_cast<Heap>(value);
}

} // namespace

unsigned default_jobs()
{
        if (const char* env = std::getenv("DELSPLIT_JOBS")) {
                unsigned value = 0;
                std::string_view text(env);
                auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
                if (ec == std::errc{} && ptr == text.data() + text.size() && value > 0)
                        return value;
        }
        return 1;
}

int cmd_classify(const std::string& ruleset, const std::string& heaps, std::ostream& out, std::ostream& err)
{
        try {
                auto rules = Ruleset::parse(ruleset);
                auto p = position_arg(rules, heaps);
                auto c = classify(rules, p);
                out << to_char(c.outcome) << ' ' << c.certificate.to_string();
                if (c.grundy)
                        out << " grundy=" << *c.grundy;
                out << "\nheaps " << p.to_list() << '\n';
                return c.outcome == Outcome::P ? kExitOk : kExitN;
        } catch (const Error& e) {
                return usage_error(err, e);
        }
}

int cmd_best_move(const std::string& ruleset, const std::string& heaps, std::ostream& out, std::ostream& err)
{
        try {
                auto rules = Ruleset::parse(ruleset);
                auto p = position_arg(rules, heaps);
                auto move = winning_move(rules, p);
                out << "heaps " << p.to_list() << '\n';
                if (!move) {
                        out << "position is P: no winning move\n";
                        return kExitOk;
                }
                out << describe(p, move->record) << '\n' << "result " << move->result.to_list() << '\n';
                return kExitOk;
        } catch (const Error& e) {
                return usage_error(err, e);
        }
}

int cmd_verify(const VerifyArgs& args, std::ostream& out, std::ostream& err)
{
        try {
                if (args.format != "csv" && args.format != "jsonl")
                        throw Error(Errc::ParseError, "format must be csv or jsonl");
                auto rules = Ruleset::parse(args.ruleset);
                OracleConfig config;
                config.token_limit = bound_arg(args.token_limit, "token limit");
                Oracle oracle(config);
                SweepOptions options;
                options.max_heap = bound_arg(args.max_heap, "max heap");
                options.jobs = std::max(1u, args.jobs);
                options.check_strategy = true;
                auto report = sweep(oracle, rules, options);

                if (!args.out_path.empty()) {
                        std::ofstream file(args.out_path, std::ios::binary);
                        if (!file)
                                throw Error(Errc::ParseError, "cannot write " + args.out_path);
                        if (args.format == "csv")
                                write_csv(file, report);
                        else
                                write_jsonl(file, report);
                }
                out << summarize(report) << '\n';
                for (const auto& row : report.rows)
                        if (!row.agree)
                                out << "mismatch " << row.position.to_list() << " closed " << to_char(row.closed)
                                    << " oracle " << to_char(row.oracle) << '\n';
                for (const auto& failure : report.failures)
                        out << "strategy " << failure << '\n';
                bool clean = report.summary.mismatches == 0 && report.summary.strategy_failures == 0;
                return clean ? kExitOk : kExitMismatch;
        } catch (const Error& e) {
                return usage_error(err, e);
        }
}

int cmd_grundy_table(const std::string& ruleset, std::int64_t max_heap, std::int64_t token_limit, std::ostream& out,
                     std::ostream& err)
{
        try {
                auto rules = Ruleset::parse(ruleset);
                OracleConfig config;
                config.token_limit = bound_arg(token_limit, "token limit");
                Oracle oracle(config);
                Heap top = bound_arg(max_heap, "max heap");
                if (top * rules.heap_count() > config.token_limit)
                        throw Error(Errc::LimitExceeded, "table exceeds the token limit; raise --token-limit");

                if (rules.heap_count() != 2) {
                        for (const auto& p : region(rules, top))
                                out << p.to_list() << ' ' << oracle.solve_grundy(rules, p) << '\n';
                        return kExitOk;
                }

                const Heap lo = rules.min_heap();
                std::vector<std::vector<unsigned>> grid;
                unsigned widest = 0;
                for (Heap x = lo; x <= top; ++x) {
                        grid.emplace_back();
                        for (Heap y = lo; y <= top; ++y) {
                                unsigned g = oracle.solve_grundy(rules, Position::from_heaps({x, y}));
                                grid.back().push_back(g);
                                widest = std::max(widest, g);
                        }
                }
                int width = static_cast<int>(std::max(std::to_string(top).size(), std::to_string(widest).size())) + 1;
                out << "x\\y";
                for (Heap y = lo; y <= top; ++y)
                        out << std::setw(width) << y;
                out << '\n';
                for (Heap x = lo; x <= top; ++x) {
                        out << std::setw(3) << x;
                        for (unsigned g : grid[x - lo])
                                out << std::setw(width) << g;
                        out << '\n';
                }
                return kExitOk;
        } catch (const Error& e) {
                return usage_error(err, e);
        }
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err)
{
        CLI::App app{"Delete-and-split Nim solver and theorem verifier"};
        app.require_subcommand(1);

        std::string ruleset, heaps, out_path, format = "csv", host = "127.0.0.1";
        std::int64_t max_heap = 0, token_limit = 96;
        unsigned jobs = default_jobs();
        int port = 8080;

        auto* classify_cmd = app.add_subcommand("classify", "Classify a position as P or N");
        classify_cmd->add_option("--ruleset", ruleset, "Ruleset code, e.g. abo:3")->required();
        classify_cmd->add_option("--heaps", heaps, "Heap sizes, comma or space separated")->required();

        auto* best_cmd = app.add_subcommand("best-move", "Show a winning move");
        best_cmd->add_option("--ruleset", ruleset, "Ruleset code")->required();
        best_cmd->add_option("--heaps", heaps, "Heap sizes")->required();

        auto* verify_cmd = app.add_subcommand("verify", "Sweep a region and compare classifier, oracle and strategy");
        verify_cmd->add_option("--ruleset", ruleset, "Ruleset code")->required();
        verify_cmd->add_option("--max-heap", max_heap, "Largest heap size in the sweep")->required();
        verify_cmd->add_option("--out", out_path, "Report file");
        verify_cmd->add_option("--format", format, "Report format")->check(CLI::IsMember({"csv", "jsonl"}));
        verify_cmd->add_option("--jobs", jobs, "Worker threads (default $DELSPLIT_JOBS or 1)");
        verify_cmd->add_option("--token-limit", token_limit, "Oracle token bound");

        auto* table_cmd = app.add_subcommand("grundy-table", "Print oracle Grundy values");
        table_cmd->add_option("--ruleset", ruleset, "Ruleset code")->required();
        table_cmd->add_option("--max-heap", max_heap, "Largest heap size")->required();
        table_cmd->add_option("--token-limit", token_limit, "Oracle token bound");

        auto* serve_cmd = app.add_subcommand("serve", "Run the JSON API");
        serve_cmd->add_option("--port", port, "Listen port");
        serve_cmd->add_option("--host", host, "Listen address");

        try {
                app.parse(argc, argv);
        } catch (const CLI::ParseError& e) {
                std::ostringstream help, fail;
                int code = app.exit(e, help, fail);
                out << help.str();
                err << fail.str();
                return code == 0 ? kExitOk : kExitUsage;
        }

        if (*classify_cmd)
                return cmd_classify(ruleset, heaps, out, err);
        if (*best_cmd)
                return cmd_best_move(ruleset, heaps, out, err);
        if (*verify_cmd)
                return cmd_verify({ruleset, max_heap, out_path, format, jobs, token_limit}, out, err);
        if (*table_cmd)
                return cmd_grundy_table(ruleset, max_heap, token_limit, out, err);

        Service service;
        HttpFrontend frontend(service);
        int bound = frontend.bind(host, port);
        if (bound < 0) {
                err << "error: cannot listen on " << host << ':' << port << '\n';
                return kExitUsage;
        }
        out << "serving on http://" << host << ':' << bound << '\n' << std::flush;
        frontend.run();
        return kExitOk;
}

} // namespace delsplit::cli
