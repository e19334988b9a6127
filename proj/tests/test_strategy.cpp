#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "delsplit/classifier.hpp"
#include "delsplit/oracle.hpp"
#include "delsplit/strategy.hpp"
#include "test_helpers.hpp"

using namespace delsplit;
using delsplit::testing::raw;

namespace {

std::vector<Position> results(const std::vector<MoveChoice>& moves)
{
        std::vector<Position> out;
        for (const auto& m : moves)
                out.push_back(m.result);
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
}

std::string illegal_reason(const Ruleset& rules, const Position& p, const MoveRecord& m)
{
        try {
                apply(rules, p, m);
        } catch (const Error& e) {
                EXPECT_EQ(e.code(), Errc::IllegalMove);
                return e.reason();
        }
        return "legal";
}

// Generate-and-filter reference: every pair of index subsets with the right
// cardinalities and every ordered composition of each split heap.
std::map<MoveKey, Position> naive_moves(const Ruleset& rules, const Position& p)
{
        const std::size_t n = p.size();
        const bool delete_nim = rules.family() == Family::DeleteNim;
        unsigned arity = rules.is_fractional() ? rules.k() : 2;
        auto allowed = [&](std::size_t deleted, std::size_t split) {
                switch (rules.family()) {
                case Family::DeleteNim:
                case Family::Single: return deleted == 1 && split == 1;
                case Family::Nmth: return deleted >= 1 && deleted <= n / 2 && split == deleted;
                default: return deleted == static_cast<std::size_t>(rules.k() - 1) * rules.m() && split == rules.m();
                }
        };

        std::map<MoveKey, Position> out;
        for (unsigned del = 0; del < (1u << n); ++del) {
                for (unsigned spl = 0; spl < (1u << n); ++spl) {
                        if (del & spl)
                                continue;
                        std::size_t nd = static_cast<std::size_t>(__builtin_popcount(del));
                        std::size_t ns = static_cast<std::size_t>(__builtin_popcount(spl));
                        if (!allowed(nd, ns))
                                continue;
                        MoveRecord m;
                        for (std::size_t i = 0; i < n; ++i) {
                                if (del >> i & 1)
                                        m.deleted.push_back(i);
                                if (spl >> i & 1)
                                        m.splits.push_back({i, {}});
                        }
                        std::function<void(std::size_t)> fill = [&](std::size_t s) {
                                if (s == m.splits.size()) {
                                        out.emplace(move_key(p, m), apply(rules, p, m));
                                        return;
                                }
                                Heap size = p[m.splits[s].heap];
                                if (delete_nim) {
                                        if (size == 0)
                                                return;
                                        --size;
                                }
                                Heap lo = delete_nim ? 0 : 1;
                                auto& parts = m.splits[s].parts;
                                std::function<void(unsigned, Heap)> compose = [&](unsigned at, Heap left) {
                                        if (at + 1 == arity) {
                                                if (left >= lo) {
                                                        parts.push_back(left);
                                                        fill(s + 1);
                                                        parts.pop_back();
                                                }
                                                return;
                                        }
                                        for (Heap v = lo; v + lo * (arity - at - 1) <= left; ++v) {
                                                parts.push_back(v);
                                                compose(at + 1, left - v);
                                                parts.pop_back();
                                        }
                                };
                                compose(0, size);
                        };
                        fill(0);
                }
        }
        return out;
}

} // namespace

TEST(LegalMoves, SingleFourExample)
{
        auto moves = legal_moves(Ruleset::single(4), raw({1, 2, 2, 2}));
        EXPECT_EQ(results(moves), (std::vector<Position>{raw({1, 1, 1, 2}), raw({1, 1, 2, 2})}));
        // delete a 1 or a 2, always splitting a 2 into 1+1
        EXPECT_EQ(moves.size(), 2u);
}

TEST(LegalMoves, TerminalHasNone)
{
        EXPECT_TRUE(legal_moves(Ruleset::vdn(), raw({1, 1})).empty());
}

TEST(LegalMoves, DeleteNimAllowsEmptyParts)
{
        auto moves = legal_moves(Ruleset::delete_nim(), raw({0, 2}));
        EXPECT_EQ(results(moves), (std::vector<Position>{raw({0, 1})}));
        ASSERT_EQ(moves.size(), 1u);
        EXPECT_EQ(moves[0].record.deleted, (std::vector<std::size_t>{0}));
        EXPECT_EQ(moves[0].record.splits[0].parts, (std::vector<Heap>{0, 1}));
}

TEST(LegalMoves, DeterministicOrder)
{
        auto rules = Ruleset::nmth(5);
        auto p = raw({2, 3, 4, 6, 7});
        auto moves = legal_moves(rules, p);
        EXPECT_EQ(moves.size(), legal_moves(rules, p).size());
        for (std::size_t i = 1; i < moves.size(); ++i) {
                auto prev = std::tie(moves[i - 1].result);
                auto cur = std::tie(moves[i].result);
                ASSERT_LE(prev, cur);
                if (moves[i - 1].result == moves[i].result)
                        ASSERT_LT(move_key(p, moves[i - 1].record), move_key(p, moves[i].record));
        }
}

TEST(LegalMoves, MatchesNaiveEnumerator)
{
        for (const auto& rules : delsplit::testing::small_rulesets()) {
                Heap bound = rules.heap_count() >= 6 ? 6 : 8;
                for (const auto& p : region(rules, bound)) {
                        auto naive = naive_moves(rules, p);
                        auto moves = legal_moves(rules, p);
                        ASSERT_EQ(moves.size(), naive.size()) << rules.code() << " " << p.to_string();
                        for (const auto& m : moves) {
                                auto it = naive.find(move_key(p, m.record));
                                ASSERT_NE(it, naive.end()) << rules.code() << " " << p.to_string();
                                ASSERT_EQ(it->second, m.result);
                        }
                }
        }
}

TEST(LegalMoves, ApplyReproducesEveryResult)
{
        for (const auto& rules : delsplit::testing::small_rulesets())
                for (const auto& p : region(rules, 7))
                        for (const auto& m : legal_moves(rules, p))
                                ASSERT_EQ(apply(rules, p, m.record), m.result) << rules.code() << p.to_string();
}

TEST(LegalMoves, SuccessorsAreDistinctResults)
{
        auto rules = Ruleset::half(2);
        for (const auto& p : region(rules, 9))
                ASSERT_EQ(successors(rules, p), results(legal_moves(rules, p)));
}

TEST(Apply, Examples)
{
        EXPECT_EQ(apply(Ruleset::abo(3), raw({1, 1, 9}), {{0, 1}, {{2, {1, 1, 7}}}}), raw({1, 1, 7}));
        EXPECT_EQ(apply(Ruleset::single(3), raw({2, 3, 5}), {{2}, {{0, {1, 1}}}}), raw({1, 1, 3}));
        EXPECT_EQ(apply(Ruleset::nmth(3), raw({2, 3, 5}), {{2}, {{0, {1, 1}}}}), raw({1, 1, 3}));
}

TEST(Apply, IllegalMovesCarryReasons)
{
        auto vdn = Ruleset::vdn();
        auto terminal = raw({1, 1});
        EXPECT_EQ(illegal_reason(vdn, terminal, {{0}, {{1, {1, 1}}}}), "part-sum-mismatch");
        EXPECT_EQ(illegal_reason(vdn, terminal, {{0}, {{1, {1, 0}}}}), "empty-part");
        EXPECT_EQ(illegal_reason(vdn, terminal, {{0}, {}}), "bad-cardinality");

        auto abo = Ruleset::abo(3);
        auto p = raw({1, 1, 9});
        EXPECT_EQ(illegal_reason(abo, p, {{0}, {{2, {1, 1, 7}}}}), "bad-cardinality");
        EXPECT_EQ(illegal_reason(abo, p, {{0, 1}, {{2, {1, 1, 6}}}}), "part-sum-mismatch");
        EXPECT_EQ(illegal_reason(abo, p, {{0, 1}, {{2, {2, 7}}}}), "bad-part-count");
        EXPECT_EQ(illegal_reason(abo, p, {{0, 2}, {{2, {1, 1, 7}}}}), "split-deleted-heap");
        EXPECT_EQ(illegal_reason(abo, p, {{0, 3}, {{2, {1, 1, 7}}}}), "bad-index");
        EXPECT_EQ(illegal_reason(abo, p, {{0, 0}, {{2, {1, 1, 7}}}}), "duplicate-index");

        EXPECT_EQ(illegal_reason(Ruleset::delete_nim(), raw({0, 3}), {{1}, {{0, {0, 0}}}}), "empty-heap");
        EXPECT_EQ(illegal_reason(Ruleset::nmth(4), raw({2, 2, 2, 2}), {{0, 1, 2}, {{3, {1, 1}}}}),
                  "bad-cardinality");
}

TEST(WinningMove, AboExample)
{
        auto move = winning_move(Ruleset::abo(3), raw({1, 1, 9}));
        ASSERT_TRUE(move);
        EXPECT_EQ(move->result, raw({1, 1, 7}));
        EXPECT_EQ(move->record.deleted, (std::vector<std::size_t>{0, 1}));
        ASSERT_EQ(move->record.splits.size(), 1u);
        EXPECT_EQ(move->record.splits[0].heap, 2u);
}

TEST(WinningMove, NmthExample)
{
        auto move = winning_move(Ruleset::nmth(3), raw({2, 3, 5}));
        ASSERT_TRUE(move);
        EXPECT_EQ(move->result, raw({1, 1, 3}));
        EXPECT_EQ(describe(raw({2, 3, 5}), move->record), "delete 5; split 2 -> 1+1");
}

TEST(WinningMove, NoneFromPPosition)
{
        EXPECT_FALSE(winning_move(Ruleset::half(2), raw({1, 1, 3, 4})));
        EXPECT_FALSE(winning_move(Ruleset::vdn(), raw({1, 1})));
}

TEST(WinningMove, SingleFiveUnsupported)
{
        try {
                winning_move(Ruleset::single(5), raw({1, 1, 1, 1, 2}));
                FAIL();
        } catch (const Error& e) {
                EXPECT_EQ(e.code(), Errc::Unsupported);
        }
}

TEST(WinningMove, LargeHeapsUseConstructionNotSearch)
{
        // far outside any oracle range: the construction must still land on P
        auto rules = Ruleset::kfrac(3, 2);
        auto p = raw({1, 1, 2, 2, 503, 100000});
        auto move = winning_move(rules, p);
        ASSERT_TRUE(move);
        EXPECT_EQ(classify(rules, move->result).outcome, Outcome::P);
        auto abo = Ruleset::abo(5);
        auto q = raw({3, 17, 40, 1000000, 123456789});
        auto m2 = winning_move(abo, q);
        ASSERT_TRUE(m2);
        EXPECT_EQ(classify(abo, m2->result).outcome, Outcome::P);
}

TEST(WinningMove, SoundAndClosedOnSmallSweeps)
{
        Oracle oracle;
        for (const auto& rules : delsplit::testing::small_rulesets()) {
                if (rules == Ruleset::single(5))
                        continue;
                auto report = sweep(oracle, rules, {.max_heap = 9, .check_strategy = true});
                EXPECT_EQ(report.summary.strategy_failures, 0u) << rules.code();
                for (const auto& f : report.failures)
                        ADD_FAILURE() << rules.code() << ": " << f;
        }
}

TEST(Describe, ListsSizes)
{
        auto p = raw({1, 1, 9});
        EXPECT_EQ(describe(p, {{0, 1}, {{2, {1, 1, 7}}}}), "delete 1,1; split 9 -> 1+1+7");
}
