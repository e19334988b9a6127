// Positions, rulesets and move records for delete-and-split Nim.
//
// A turn in every variant deletes some heaps and splits some of the kept
// heaps so that the number of heaps never changes. Positions are stored as
// sorted multisets; move records index into that canonical ordering.

#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "delsplit/error.hpp"

namespace delsplit {

using Heap = std::uint64_t;

enum class Family : std::uint8_t {
        DeleteNim, // 2 heaps, zeros allowed, one token removed before splitting
        Vdn,       // 2 heaps: delete one, split the other in two
        Abo,       // n heaps: delete n-1, split the last into n
        Nmth,      // n heaps: delete j <= n/2, split j of the rest in two
        Half,      // 2m heaps: delete m, split the other m in two
        KFrac,     // km heaps: delete (k-1)m, split the other m into k
        Single,    // n heaps: delete one, split one in two
};

class Ruleset {
public:
        static Ruleset delete_nim();
        static Ruleset vdn();
        static Ruleset abo(unsigned n);
        static Ruleset nmth(unsigned n);
        static Ruleset half(unsigned m);
        static Ruleset kfrac(unsigned k, unsigned m);
        static Ruleset single(unsigned n);

        Family family() const noexcept { return family_; }

        /// Number of heaps in every position of this ruleset.
        unsigned heap_count() const noexcept { return n_; }
        /// Split arity for the fractional families (VDN, ABO, Half, KFrac).
        unsigned k() const noexcept { return k_; }
        /// Number of kept heaps for the fractional families.
        unsigned m() const noexcept { return m_; }

        Heap min_heap() const noexcept { return family_ == Family::DeleteNim ? 0 : 1; }

        /// VDN, ABO and Half are instances of KFrac(k, m).
        bool is_fractional() const noexcept;

        /// Textual code, e.g. "abo:3" or "kfrac:3,2".
        std::string code() const;
        /// Inverse of code(). Throws Error(ParseError) or Error(DomainError).
        static Ruleset parse(std::string_view text);

        friend bool operator==(const Ruleset&, const Ruleset&) = default;
        friend auto operator<=>(const Ruleset&, const Ruleset&) = default;

private:
        Ruleset(Family f, unsigned n, unsigned k, unsigned m) : family_(f), n_(n), k_(k), m_(m) {}

        Family family_;
        unsigned n_;
        unsigned k_;
        unsigned m_;
};

class Position {
public:
        Position() = default;

        /// Validates against the ruleset and sorts. Throws WrongArity or
        /// IllegalHeapSize.
        static Position canonicalize(std::span<const std::int64_t> heaps, const Ruleset& rules);
        static Position canonicalize(std::initializer_list<std::int64_t> heaps, const Ruleset& rules)
        {
                return canonicalize(std::span<const std::int64_t>(heaps.begin(), heaps.size()), rules);
        }

        /// Sorts without ruleset validation; for internal successor construction.
        static Position from_heaps(std::vector<Heap> heaps);

        std::span<const Heap> heaps() const noexcept { return heaps_; }
        std::size_t size() const noexcept { return heaps_.size(); }
        Heap operator[](std::size_t i) const { return heaps_[i]; }
        Heap total() const noexcept;

        /// "<1,2,7>"
        std::string to_string() const;
        /// "1,2,7"
        std::string to_list() const;

        friend bool operator==(const Position&, const Position&) = default;
        friend auto operator<=>(const Position&, const Position&) = default;

private:
        explicit Position(std::vector<Heap> heaps) : heaps_(std::move(heaps)) {}

        std::vector<Heap> heaps_;
};

struct PositionHash {
        std::size_t operator()(const Position& p) const noexcept;
};

struct Split {
        std::size_t heap; // index into the pre-move canonical position
        std::vector<Heap> parts;

        friend bool operator==(const Split&, const Split&) = default;
};

struct MoveRecord {
        std::vector<std::size_t> deleted; // ascending
        std::vector<Split> splits;        // ascending by heap index

        friend bool operator==(const MoveRecord&, const MoveRecord&) = default;
};

/// True iff the position has no legal move.
bool is_terminal(const Ruleset& rules, const Position& p);

/// Throws WrongArity unless p has the ruleset's heap count.
void check_arity(const Ruleset& rules, const Position& p);

} // namespace delsplit
