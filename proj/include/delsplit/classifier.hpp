// Closed-form P/N classification for every supported ruleset.
//
// Each answer carries a certificate naming the characterization condition
// that was matched (P) or the first condition found violated (N). Single
// delete Nim is characterized for n <= 4 only; larger n is refused.

#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "delsplit/game.hpp"

namespace delsplit {

enum class Outcome : std::uint8_t { P, N };

inline char to_char(Outcome o) { return o == Outcome::P ? 'P' : 'N'; }

enum class ConditionId : std::uint8_t {
        DeleteNimEven,
        VdnOdd,
        AboStar,
        NmthEvenAllOdd,
        NmthOddEqualV2,
        KFracA,  // first (k-1)m+1 heaps are k-oddoid
        KFracB,  // every k-evenoid heap reaches the power bound
        KFracAB, // both of the above (P certificate)
        Single3EqualV2,
        Single4Case1,
        Single4Case2,
        Single4Case3,
        Single4Case4,
        Single4Case5,
        Single4Case2A,
        Single4Case3A,
        Single4Case3B,
        Single4Case3C,
        Single4Case4A,
        Single4Case4B,
        Single4Case4C,
        Single4Case4D,
        Single4Case4E,
        Single4Case5A,
        Single4Case5B,
        Single4Case5C,
        Single4Case5D,
        Single4Case5E,
        Single4Case5F,
        Single4Pattern, // valuation pattern fits none of the five cases
};

std::string_view to_string(ConditionId id);

struct Certificate {
        ConditionId id;
        bool matched; // true exactly for P answers

        std::string to_string() const; // "abo-star" or "abo-star violated"

        friend bool operator==(const Certificate&, const Certificate&) = default;
};

struct Classification {
        Outcome outcome;
        Certificate certificate;
        std::optional<unsigned> grundy; // Delete Nim only
};

/// Sprague-Grundy value of Delete Nim <x,y>: v2((x OR y) + 1).
unsigned delete_nim_grundy(Heap x, Heap y) noexcept;

/// Throws WrongArity, and Unsupported for Single(n >= 5).
Classification classify(const Ruleset& rules, const Position& p);

/// Four-heap Single-delete condition for heaps already ordered so that
/// v2(w) <= v2(x) <= v2(y) <= v2(z). Throws DomainError if not so ordered.
Certificate single4_certificate(Heap w, Heap x, Heap y, Heap z);

/// The (w,x,y,z) order used by classify: ascending v2, then ascending size.
std::array<Heap, 4> single4_order(const Position& p);

} // namespace delsplit
