// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fail.
// Every check is exact; timings are wall-clock on the current machine.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "delsplit/classifier.hpp"
#include "delsplit/numtheory.hpp"
#include "delsplit/oracle.hpp"
#include "delsplit/strategy.hpp"

using namespace delsplit;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
        return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Verdict {
        bool pass = true;
        std::ostringstream detail;

        void fail(const std::string& why)
        {
                if (pass)
                        detail << "first failure: " << why << "; ";
                pass = false;
        }
};

int failures = 0;

void report(const char* name, const Verdict& v)
{
        std::printf("%s %s: %s\n", v.pass ? "PASS" : "FAIL", name, v.detail.str().c_str());
        std::fflush(stdout);
        if (!v.pass)
                ++failures;
}

unsigned jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

// Independent reference: trailing ones of x|y, counted bit by bit.
unsigned reference_grundy(Heap x, Heap y)
{
        Heap z = x | y;
        unsigned count = 0;
        while (z & 1) {
                ++count;
                z >>= 1;
        }
        return count;
}

struct SweepRun {
        Ruleset rules;
        Heap max_heap;
        SweepReport report;
        double seconds;
};

std::vector<SweepRun> all_sweeps;

SweepRun run_sweep(const Ruleset& rules, Heap max_heap)
{
        Oracle oracle({.token_limit = max_heap * rules.heap_count()});
        auto start = Clock::now();
        auto report = sweep(oracle, rules, {.max_heap = max_heap, .jobs = jobs(), .check_strategy = true});
        SweepRun run{rules, max_heap, std::move(report), seconds_since(start)};
        all_sweeps.push_back(run);
        return run;
}

void check_sweeps(Verdict& v, const std::vector<SweepRun>& runs)
{
        for (const auto& run : runs) {
                const auto& s = run.report.summary;
                v.detail << run.rules.code() << "<=" << run.max_heap << " positions=" << s.positions
                         << " mismatches=" << s.mismatches << " (" << run.seconds << " s); ";
                if (s.mismatches != 0)
                        v.fail(run.rules.code() + " has classifier/oracle mismatches");
                if (s.positions == 0)
                        v.fail(run.rules.code() + " swept no positions");
        }
}

double total_seconds(const std::vector<SweepRun>& runs)
{
        return std::accumulate(runs.begin(), runs.end(), 0.0,
                               [](double acc, const SweepRun& r) { return acc + r.seconds; });
}

void check_delete_nim_grundy()
{
        Verdict v;
        auto rules = Ruleset::delete_nim();
        Oracle oracle({.token_limit = 128});
        auto start = Clock::now();
        std::size_t checked = 0;
        for (Heap x = 0; x <= 64; ++x)
                for (Heap y = 0; y <= 64; ++y) {
                        auto p = Position::canonicalize(
                            std::vector<std::int64_t>{static_cast<std::int64_t>(x), static_cast<std::int64_t>(y)}, rules);
                        unsigned g = oracle.solve_grundy(rules, p);
                        if (g != reference_grundy(x, y))
                                v.fail("<" + std::to_string(x) + "," + std::to_string(y) + ">");
                        if (classify(rules, p).grundy != std::optional<unsigned>(g))
                                v.fail("classifier grundy at <" + std::to_string(x) + "," + std::to_string(y) + ">");
                        ++checked;
                }
        double elapsed = seconds_since(start);
        v.detail << checked << " positions in " << elapsed << " s";
        if (checked != 4225)
                v.fail("wrong position count");
        if (elapsed >= 5.0)
                v.fail("slower than 5 s");
        report("deletenim-grundy-formula", v);
}

void check_vdn_correspondence()
{
        Verdict v;
        Oracle oracle;
        std::size_t checked = 0;
        for (Heap x = 1; x <= 40; ++x)
                for (Heap y = 1; y <= 40; ++y) {
                        auto vdn = oracle.solve_outcome(Ruleset::vdn(), Position::from_heaps({x, y}));
                        auto dn = oracle.solve_outcome(Ruleset::delete_nim(), Position::from_heaps({x - 1, y - 1}));
                        if (vdn != dn)
                                v.fail("<" + std::to_string(x) + "," + std::to_string(y) + ">");
                        ++checked;
                }
        v.detail << checked << " pairs";
        report("vdn-correspondence", v);
}

void check_abo()
{
        Verdict v;
        std::vector<SweepRun> runs{run_sweep(Ruleset::abo(3), 30), run_sweep(Ruleset::abo(4), 26)};
        check_sweeps(v, runs);
        double total = total_seconds(runs);
        v.detail << "total " << total << " s";
        if (total >= 60.0)
                v.fail("slower than 60 s");
        report("abo-classifier-vs-oracle", v);
}

void check_nmth()
{
        Verdict v;
        check_sweeps(v, {run_sweep(Ruleset::nmth(3), 24), run_sweep(Ruleset::nmth(4), 14),
                         run_sweep(Ruleset::nmth(5), 10)});
        report("nmth-classifier-vs-oracle", v);
}

void check_half()
{
        Verdict v;
        check_sweeps(v, {run_sweep(Ruleset::half(2), 20), run_sweep(Ruleset::half(3), 10)});
        report("half-classifier-vs-oracle", v);
}

void check_kfrac()
{
        Verdict v;
        std::vector<SweepRun> runs{run_sweep(Ruleset::kfrac(3, 1), 30), run_sweep(Ruleset::kfrac(3, 2), 11)};
        check_sweeps(v, runs);

        const SweepRun* abo3 = nullptr;
        for (const auto& run : all_sweeps)
                if (run.rules == Ruleset::abo(3) && run.max_heap == 30)
                        abo3 = &run;
        if (!abo3) {
                v.fail("no abo:3 run to compare against");
        } else {
                std::ostringstream a, b;
                write_csv(a, abo3->report);
                write_csv(b, runs[0].report);
                if (a.str() != b.str())
                        v.fail("kfrac:3,1 report differs from abo:3");
                else
                        v.detail << "kfrac:3,1 report identical to abo:3; ";
        }
        double total = total_seconds(runs);
        v.detail << "total " << total << " s";
        if (total >= 600.0)
                v.fail("slower than 10 min");
        report("kfrac-classifier-vs-oracle", v);
}

void check_single()
{
        Verdict v;
        std::vector<SweepRun> runs{run_sweep(Ruleset::single(3), 32), run_sweep(Ruleset::single(4), 16)};
        check_sweeps(v, runs);
        const auto& hits = runs[1].report.summary.certificates;
        for (int c = 1; c <= 5; ++c) {
                std::string id = "single4-case" + std::to_string(c);
                auto it = hits.find(id);
                std::size_t n = it == hits.end() ? 0 : it->second;
                v.detail << id << "=" << n << " ";
                if (n == 0)
                        v.fail(id + " never hit");
        }
        report("single-classifier-vs-oracle", v);
}

void check_strategy_soundness()
{
        Verdict v;
        std::size_t checked = 0, failed = 0;
        for (const auto& run : all_sweeps) {
                const auto& s = run.report.summary;
                checked += s.strategy_checked;
                failed += s.strategy_failures;
                if (s.strategy_checked != s.positions)
                        v.fail(run.rules.code() + " did not check every position");
                if (!run.report.failures.empty())
                        v.fail(run.rules.code() + ": " + run.report.failures.front());
        }
        v.detail << all_sweeps.size() << " sweeps, " << checked << " positions, " << failed << " violations";
        if (failed != 0)
                v.fail("strategy violations");
        report("strategy-soundness", v);
}

Heap power(unsigned k, unsigned s)
{
        Heap out = 1;
        while (s--)
                out *= k;
        return out;
}

Heap sum(const nt::SplitParts& parts) { return std::accumulate(parts.begin(), parts.end(), Heap{0}); }

unsigned reference_v2(Heap z)
{
        unsigned v = 0;
        while (z % 2 == 0) {
                z /= 2;
                ++v;
        }
        return v;
}

bool reference_oddoid(Heap z, unsigned k)
{
        Heap r = z % (static_cast<Heap>(k) * (k - 1));
        return r >= 1 && r <= k - 1;
}

void check_lemma_suites()
{
        Verdict v;
        std::size_t cases = 0;

        for (Heap x = 1; x <= 5000; ++x)
                for (Heap y = 1; y <= 5000; ++y) {
                        unsigned vx = nt::v2(x), vy = nt::v2(y), vz = nt::v2(x + y);
                        if (vx != reference_v2(x))
                                v.fail("v2(" + std::to_string(x) + ")");
                        bool ok = vx == vy ? vz > vx : vz == std::min(vx, vy);
                        if (!ok)
                                v.fail("valuation sum rule at " + std::to_string(x) + "," + std::to_string(y));
                        ++cases;
                }
        for (Heap z = 2; z <= 5000; ++z)
                for (unsigned j = 0; j < reference_v2(z); ++j) {
                        auto [x, y] = nt::split_equal_valuation(z, j);
                        if (x + y != z || x < 1 || reference_v2(x) != j || reference_v2(y) != j)
                                v.fail("split_equal_valuation(" + std::to_string(z) + "," + std::to_string(j) + ")");
                        ++cases;
                }
        v.detail << "propositions " << cases << " cases; ";

        std::size_t compositions = 0;
        for (unsigned k : {2u, 3u})
                for (Heap z = k; z <= 60; ++z) {
                        if (!reference_oddoid(z, k))
                                continue;
                        std::vector<Heap> parts(k);
                        std::function<void(unsigned, Heap)> walk = [&](unsigned at, Heap left) {
                                if (at + 1 == k) {
                                        parts[at] = left;
                                        ++compositions;
                                        if (std::all_of(parts.begin(), parts.end(),
                                                        [k](Heap h) { return reference_oddoid(h, k); }))
                                                v.fail("oddoid " + std::to_string(z) + " splits into oddoids");
                                        return;
                                }
                                for (Heap p = 1; p + (k - at - 1) <= left; ++p) {
                                        parts[at] = p;
                                        walk(at + 1, left - p);
                                }
                        };
                        walk(0, z);
                }
        v.detail << "lemma (1) " << compositions << " compositions; ";

        std::size_t splits = 0;
        for (unsigned k = 2; k <= 8; ++k) {
                const Heap mod = static_cast<Heap>(k) * (k - 1);
                for (Heap x = k; x <= mod; ++x) {
                        auto parts = nt::split_small(x, k);
                        bool ok = parts.size() == k && sum(parts) == x &&
                                  std::all_of(parts.begin(), parts.end(), [k](Heap h) { return h >= 1 && h <= k - 1; });
                        if (!ok)
                                v.fail("split_small(" + std::to_string(x) + "," + std::to_string(k) + ")");
                        ++splits;
                }
                for (Heap y = k; y <= 5000; ++y) {
                        auto tail = nt::split_keep_tail(y, k);
                        bool ok = tail.size() == k && sum(tail) == y && tail.back() + mod >= y &&
                                  std::all_of(tail.begin(), tail.end() - 1, [k](Heap h) { return h >= 1 && h <= k - 1; });
                        if (reference_oddoid(y, k))
                                ok = ok && tail.back() == y - (k - 1);
                        else
                                ok = ok && std::all_of(tail.begin(), tail.end(),
                                                       [k](Heap h) { return reference_oddoid(h, k); });
                        if (!ok)
                                v.fail("split_keep_tail(" + std::to_string(y) + "," + std::to_string(k) + ")");
                        ++splits;
                        if (reference_oddoid(y, k))
                                continue;
                        unsigned s = 1;
                        while (power(k, s) <= y)
                                ++s;
                        for (unsigned t = s; t <= s + 2; ++t) {
                                auto parts = nt::split_evenoid_bounded(y, k, t);
                                bool fine = parts.size() == k && sum(parts) == y &&
                                            std::all_of(parts.begin(), parts.end(), [&](Heap h) {
                                                    return h >= 1 && reference_oddoid(h, k) && h < power(k, t - 1);
                                            });
                                if (!fine)
                                        v.fail("split_evenoid_bounded(" + std::to_string(y) + "," +
                                               std::to_string(k) + "," + std::to_string(t) + ")");
                                ++splits;
                        }
                }
        }
        v.detail << "lemma (2)/(3) " << splits << " splits";
        report("lemma-proposition-suites", v);
}

} // namespace

int main()
{
        std::printf("acceptance: %u worker threads\n", jobs());
        auto guarded = [](const char* name, const std::function<void()>& check) {
                try {
                        check();
                } catch (const std::exception& e) {
                        Verdict v;
                        v.fail(std::string("exception: ") + e.what());
                        report(name, v);
                }
        };
        guarded("deletenim-grundy-formula", check_delete_nim_grundy);
        guarded("vdn-correspondence", check_vdn_correspondence);
        guarded("abo-classifier-vs-oracle", check_abo);
        guarded("nmth-classifier-vs-oracle", check_nmth);
        guarded("half-classifier-vs-oracle", check_half);
        guarded("kfrac-classifier-vs-oracle", check_kfrac);
        guarded("single-classifier-vs-oracle", check_single);
        guarded("strategy-soundness", check_strategy_soundness);
        guarded("lemma-proposition-suites", check_lemma_suites);
        std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
        return failures ? 1 : 0;
}
