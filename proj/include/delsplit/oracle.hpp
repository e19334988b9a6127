// Ground-truth solver: memoized exhaustive evaluation of outcomes and
// Sprague-Grundy values over the option graph, plus bounded sweeps that
// compare the oracle against the closed-form classifier.
//
// Every move strictly lowers the total token count, so the recursion is
// well-founded; the token bound keeps accidental huge searches in check.

#pragma once

#include <array>
#include <atomic>
#include <cstddef>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "delsplit/classifier.hpp"
#include "delsplit/game.hpp"

namespace delsplit {

struct OracleConfig {
        Heap token_limit = 96;
        std::size_t max_entries = 50'000'000;
        bool memoize = true;
};

struct MemoKey {
        Ruleset rules;
        Position position;

        friend bool operator==(const MemoKey&, const MemoKey&) = default;
};

struct MemoKeyHash {
        std::size_t operator()(const MemoKey& key) const noexcept;
};

struct MemoRecord {
        std::optional<Outcome> outcome;
        std::optional<unsigned> grundy;
};

/// Thread-safe table of solved positions. Each field of a record is written
/// at most once; conflicting writes raise InternalContradiction.
class MemoTable {
public:
        std::optional<MemoRecord> find(const MemoKey& key) const;
        void record_outcome(const MemoKey& key, Outcome outcome);
        void record_grundy(const MemoKey& key, unsigned grundy);
        std::size_t size() const noexcept { return size_.load(std::memory_order_relaxed); }

private:
        static constexpr std::size_t kShards = 64;

        struct Shard {
                mutable std::shared_mutex mutex;
                std::unordered_map<MemoKey, MemoRecord, MemoKeyHash> entries;
        };

        Shard& shard_for(const MemoKey& key) const;

        mutable std::array<Shard, kShards> shards_;
        std::atomic<std::size_t> size_{0};
};

class Oracle {
public:
        explicit Oracle(OracleConfig config = {});

        /// P iff every option is N. Throws LimitExceeded past the configured bounds.
        Outcome solve_outcome(const Ruleset& rules, const Position& p);
        /// mex of the option values; zero exactly on P-positions.
        unsigned solve_grundy(const Ruleset& rules, const Position& p);

        const OracleConfig& config() const noexcept { return config_; }
        std::size_t memo_size() const noexcept { return memo_.size(); }

private:
        void check_limits(const Position& p) const;

        OracleConfig config_;
        MemoTable memo_;
};

struct SweepRow {
        Position position;
        Outcome closed;
        Certificate certificate;
        Outcome oracle;
        unsigned grundy;
        bool agree;
};

struct SweepSummary {
        std::size_t positions = 0;
        std::size_t oracle_p = 0;
        std::size_t mismatches = 0;
        std::size_t strategy_checked = 0;
        std::size_t strategy_failures = 0;
        std::map<std::string, std::size_t> certificates; // matched certificate id -> count
};

struct SweepReport {
        Ruleset rules;
        Heap max_heap;
        std::vector<SweepRow> rows; // lexicographic by position
        SweepSummary summary;
        std::vector<std::string> failures; // strategy-soundness violations, readable
};

struct SweepOptions {
        Heap max_heap = 0;
        unsigned jobs = 1;
        /// Also check that every N row's winning move reaches a P-position and
        /// that every option of a P row is an N-position (classifier and oracle).
        bool check_strategy = false;
};

/// All canonical positions of the ruleset with every heap <= max_heap.
std::vector<Position> region(const Ruleset& rules, Heap max_heap);

SweepReport sweep(Oracle& oracle, const Ruleset& rules, const SweepOptions& options);

/// heaps;closed;oracle;grundy;agree
void write_csv(std::ostream& out, const SweepReport& report);
/// One JSON object per row with the same fields as the CSV columns.
void write_jsonl(std::ostream& out, const SweepReport& report);
/// One-line human summary.
std::string summarize(const SweepReport& report);

} // namespace delsplit
