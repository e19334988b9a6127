// Legal-move enumeration and constructive winning moves.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "delsplit/classifier.hpp"
#include "delsplit/game.hpp"

namespace delsplit {

struct MoveChoice {
        MoveRecord record;
        Position result;
};

/// Identity of a move up to heap symmetry: the deleted sizes and, for each
/// split heap, its size and part multiset. Two moves with equal keys are the
/// same option.
struct MoveKey {
        std::vector<Heap> deleted;
        std::vector<std::pair<Heap, std::vector<Heap>>> splits;

        friend bool operator==(const MoveKey&, const MoveKey&) = default;
        friend auto operator<=>(const MoveKey&, const MoveKey&) = default;
};

MoveKey move_key(const Position& p, const MoveRecord& m);

/// Every distinct option of p, ordered by resulting position then move key.
/// Empty exactly when p is terminal.
std::vector<MoveChoice> legal_moves(const Ruleset& rules, const Position& p);

/// Distinct canonical successors of p, ascending.
std::vector<Position> successors(const Ruleset& rules, const Position& p);

/// Validates m against the ruleset and returns the canonical successor.
/// Throws Error(IllegalMove) with reason one of: bad-index, duplicate-index,
/// split-deleted-heap, bad-cardinality, bad-part-count, part-sum-mismatch,
/// empty-part, empty-heap.
Position apply(const Ruleset& rules, const Position& p, const MoveRecord& m);

/// A move to a P-position, or nullopt when p is itself a P-position.
/// Built from the characterization's constructive proof; Single(4) searches
/// legal_moves instead. Throws Unsupported for Single(n >= 5) and
/// InternalContradiction if a construction ever lands on an N-position.
std::optional<MoveChoice> winning_move(const Ruleset& rules, const Position& p);

/// Human-readable move, e.g. "delete 5; split 2 -> 1+1".
std::string describe(const Position& p, const MoveRecord& m);

} // namespace delsplit
