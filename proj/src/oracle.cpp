#include "delsplit/oracle.hpp"

#include <algorithm>
#include <exception>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "delsplit/strategy.hpp"

namespace delsplit {

std::size_t MemoKeyHash::operator()(const MemoKey& key) const noexcept
{
        std::size_t h = PositionHash{}(key.position);
        std::size_t r = static_cast<std::size_t>(key.rules.family()) * 0x9e3779b97f4a7c15ull ^
                        (static_cast<std::size_t>(key.rules.heap_count()) << 8) ^
                        (static_cast<std::size_t>(key.rules.k()) << 20);
        return h ^ (r + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2));
}

MemoTable::Shard& MemoTable::shard_for(const MemoKey& key) const
{
        return shards_[MemoKeyHash{}(key) % kShards];
}

std::optional<MemoRecord> MemoTable::find(const MemoKey& key) const
{
        auto& shard = shard_for(key);
        std::shared_lock lock(shard.mutex);
        auto it = shard.entries.find(key);
        if (it == shard.entries.end())
                return std::nullopt;
        return it->second;
}

void MemoTable::record_outcome(const MemoKey& key, Outcome outcome)
{
        auto& shard = shard_for(key);
        std::unique_lock lock(shard.mutex);
        auto [it, inserted] = shard.entries.try_emplace(key);
        if (inserted)
                size_.fetch_add(1, std::memory_order_relaxed);
        auto& rec = it->second;
        if (rec.outcome && *rec.outcome != outcome)
                throw Error(Errc::InternalContradiction, "memo outcome rewritten for " + key.position.to_string());
        rec.outcome = outcome;
}

void MemoTable::record_grundy(const MemoKey& key, unsigned grundy)
{
        auto& shard = shard_for(key);
        std::unique_lock lock(shard.mutex);
        auto [it, inserted] = shard.entries.try_emplace(key);
        if (inserted)
                size_.fetch_add(1, std::memory_order_relaxed);
        auto& rec = it->second;
        Outcome implied = grundy == 0 ? Outcome::P : Outcome::N;
        if ((rec.grundy && *rec.grundy != grundy) || (rec.outcome && *rec.outcome != implied))
                throw Error(Errc::InternalContradiction, "memo grundy disagrees for " + key.position.to_string());
        rec.grundy = grundy;
        rec.outcome = implied;
}

Oracle::Oracle(OracleConfig config) : config_(config) {}

void Oracle::check_limits(const Position& p) const
{
        if (p.total() > config_.token_limit)
                throw Error(Errc::LimitExceeded, "position " + p.to_string() + " exceeds the token limit of " +
                                                         std::to_string(config_.token_limit));
        if (memo_.size() > config_.max_entries)
                throw Error(Errc::LimitExceeded, "memo table exceeded " + std::to_string(config_.max_entries) +
                                                         " entries");
}

Outcome Oracle::solve_outcome(const Ruleset& rules, const Position& p)
{
        check_limits(p);
        MemoKey key{rules, p};
        if (config_.memoize)
                if (auto rec = memo_.find(key); rec && rec->outcome)
                        return *rec->outcome;

        Outcome result = Outcome::P;
        for (const auto& next : successors(rules, p))
                if (solve_outcome(rules, next) == Outcome::P) {
                        result = Outcome::N;
                        break;
                }
        if (config_.memoize)
                memo_.record_outcome(key, result);
        return result;
}

unsigned Oracle::solve_grundy(const Ruleset& rules, const Position& p)
{
        check_limits(p);
        MemoKey key{rules, p};
        if (config_.memoize)
                if (auto rec = memo_.find(key); rec && rec->grundy)
                        return *rec->grundy;

        std::vector<unsigned> seen;
        for (const auto& next : successors(rules, p))
                seen.push_back(solve_grundy(rules, next));
        std::sort(seen.begin(), seen.end());
        unsigned mex = 0;
        for (unsigned g : seen) {
                if (g == mex)
                        ++mex;
                else if (g > mex)
                        break;
        }
        if (config_.memoize)
                memo_.record_grundy(key, mex);
        return mex;
}

std::vector<Position> region(const Ruleset& rules, Heap max_heap)
{
        const std::size_t n = rules.heap_count();
        const Heap lo = rules.min_heap();
        std::vector<Position> out;
        if (max_heap < lo)
                return out;
        std::vector<Heap> heaps(n, lo);
        while (true) {
                out.push_back(Position::from_heaps(heaps));
                // next non-decreasing sequence in lexicographic order
                std::size_t i = n;
                while (i > 0 && heaps[i - 1] == max_heap)
                        --i;
                if (i == 0)
                        break;
                Heap v = heaps[i - 1] + 1;
                std::fill(heaps.begin() + static_cast<std::ptrdiff_t>(i - 1), heaps.end(), v);
        }
        return out;
}

namespace {

void check_row(Oracle& oracle, const Ruleset& rules, const SweepRow& row, std::vector<std::string>& failures)
{
        const auto& p = row.position;
        try {
                if (row.oracle == Outcome::N) {
                        auto move = winning_move(rules, p);
                        if (!move) {
                                failures.push_back(p.to_string() + ": no winning move from an oracle N-position");
                                return;
                        }
                        auto closed = classify(rules, move->result).outcome;
                        auto truth = oracle.solve_outcome(rules, move->result);
                        if (closed != Outcome::P || truth != Outcome::P)
                                failures.push_back(p.to_string() + ": winning move reaches " +
                                                   move->result.to_string() + " (classifier " + to_char(closed) +
                                                   ", oracle " + to_char(truth) + ")");
                } else {
                        for (const auto& next : successors(rules, p)) {
                                auto closed = classify(rules, next).outcome;
                                auto truth = oracle.solve_outcome(rules, next);
                                if (closed != Outcome::N || truth != Outcome::N) {
                                        failures.push_back(p.to_string() + ": P-position has option " +
                                                           next.to_string() + " (classifier " + to_char(closed) +
                                                           ", oracle " + to_char(truth) + ")");
                                        return;
                                }
                        }
                }
        } catch (const Error& e) {
                if (e.code() != Errc::InternalContradiction)
                        throw;
                failures.push_back(p.to_string() + ": " + e.what());
        }
}

} // namespace

SweepReport sweep(Oracle& oracle, const Ruleset& rules, const SweepOptions& options)
{
        const Heap max_total = options.max_heap * rules.heap_count();
        if (options.max_heap != 0 && max_total / rules.heap_count() != options.max_heap)
                throw Error(Errc::LimitExceeded, "sweep bound overflows");
        if (max_total > oracle.config().token_limit)
                throw Error(Errc::LimitExceeded, "sweep of " + rules.code() + " up to " +
                                                         std::to_string(options.max_heap) + " reaches " +
                                                         std::to_string(max_total) + " tokens, over the limit of " +
                                                         std::to_string(oracle.config().token_limit));

        auto positions = region(rules, options.max_heap);
        SweepReport report{rules, options.max_heap, {}, {}, {}};
        report.rows.resize(positions.size());
        std::vector<std::vector<std::string>> failures(std::max(1u, options.jobs));

        auto work = [&](unsigned worker, unsigned stride) {
                for (std::size_t i = worker; i < positions.size(); i += stride) {
                        const auto& p = positions[i];
                        auto closed = classify(rules, p);
                        unsigned g = oracle.solve_grundy(rules, p);
                        Outcome truth = g == 0 ? Outcome::P : Outcome::N;
                        report.rows[i] = {p, closed.outcome, closed.certificate, truth, g, closed.outcome == truth};
                        if (options.check_strategy)
                                check_row(oracle, rules, report.rows[i], failures[worker]);
                }
        };

        unsigned jobs = std::max(1u, options.jobs);
        if (jobs == 1) {
                work(0, 1);
        } else {
                std::vector<std::exception_ptr> errors(jobs);
                std::vector<std::thread> threads;
                for (unsigned w = 0; w < jobs; ++w)
                        threads.emplace_back([&, w] {
                                try {
                                        work(w, jobs);
                                } catch (...) {
                                        errors[w] = std::current_exception();
                                }
                        });
                for (auto& t : threads)
                        t.join();
                for (auto& e : errors)
                        if (e)
                                std::rethrow_exception(e);
        }

        auto& s = report.summary;
        s.positions = report.rows.size();
        for (const auto& row : report.rows) {
                if (row.oracle == Outcome::P)
                        ++s.oracle_p;
                if (!row.agree)
                        ++s.mismatches;
                if (row.certificate.matched)
                        ++s.certificates[std::string(to_string(row.certificate.id))];
        }
        if (options.check_strategy)
                s.strategy_checked = report.rows.size();
        for (auto& list : failures)
                for (auto& f : list)
                        report.failures.push_back(std::move(f));
        std::sort(report.failures.begin(), report.failures.end());
        s.strategy_failures = report.failures.size();
        return report;
}

void write_csv(std::ostream& out, const SweepReport& report)
{
        out << "heaps;closed;oracle;grundy;agree\n";
        for (const auto& row : report.rows)
                out << row.position.to_list() << ';' << to_char(row.closed) << ';' << to_char(row.oracle) << ';'
                    << row.grundy << ';' << (row.agree ? "true" : "false") << '\n';
}

void write_jsonl(std::ostream& out, const SweepReport& report)
{
        for (const auto& row : report.rows) {
                nlohmann::ordered_json j;
                j["heaps"] = std::vector<Heap>(row.position.heaps().begin(), row.position.heaps().end());
                j["closed"] = std::string(1, to_char(row.closed));
                j["oracle"] = std::string(1, to_char(row.oracle));
                j["grundy"] = row.grundy;
                j["agree"] = row.agree;
                out << j.dump() << '\n';
        }
}

std::string summarize(const SweepReport& report)
{
        const auto& s = report.summary;
        std::ostringstream out;
        out << report.rules.code() << " max-heap " << report.max_heap << ": positions=" << s.positions
            << " P=" << s.oracle_p << " mismatches=" << s.mismatches;
        if (s.strategy_checked)
                out << " strategy-failures=" << s.strategy_failures;
        return out.str();
}

} // namespace delsplit
