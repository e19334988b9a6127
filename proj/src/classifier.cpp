#include "delsplit/classifier.hpp"

#include <algorithm>

#include "delsplit/numtheory.hpp"

namespace delsplit {

std::string_view to_string(ConditionId id)
{
        switch (id) {
        case ConditionId::DeleteNimEven: return "deleteNim-even";
        case ConditionId::VdnOdd: return "vdn-odd";
        case ConditionId::AboStar: return "abo-star";
        case ConditionId::NmthEvenAllOdd: return "nmth-even-all-odd";
        case ConditionId::NmthOddEqualV2: return "nmth-odd-equal-v2";
        case ConditionId::KFracA: return "kfrac-a";
        case ConditionId::KFracB: return "kfrac-b";
        case ConditionId::KFracAB: return "kfrac-ab";
        case ConditionId::Single3EqualV2: return "single3-equal-v2";
        case ConditionId::Single4Case1: return "single4-case1";
        case ConditionId::Single4Case2: return "single4-case2";
        case ConditionId::Single4Case3: return "single4-case3";
        case ConditionId::Single4Case4: return "single4-case4";
        case ConditionId::Single4Case5: return "single4-case5";
        case ConditionId::Single4Case2A: return "single4-case2-2A";
        case ConditionId::Single4Case3A: return "single4-case3-3A";
        case ConditionId::Single4Case3B: return "single4-case3-3B";
        case ConditionId::Single4Case3C: return "single4-case3-3C";
        case ConditionId::Single4Case4A: return "single4-case4-4A";
        case ConditionId::Single4Case4B: return "single4-case4-4B";
        case ConditionId::Single4Case4C: return "single4-case4-4C";
        case ConditionId::Single4Case4D: return "single4-case4-4D";
        case ConditionId::Single4Case4E: return "single4-case4-4E";
        case ConditionId::Single4Case5A: return "single4-case5-5A";
        case ConditionId::Single4Case5B: return "single4-case5-5B";
        case ConditionId::Single4Case5C: return "single4-case5-5C";
        case ConditionId::Single4Case5D: return "single4-case5-5D";
        case ConditionId::Single4Case5E: return "single4-case5-5E";
        case ConditionId::Single4Case5F: return "single4-case5-5F";
        case ConditionId::Single4Pattern: return "single4-pattern";
        }
        return "unknown";
}

std::string Certificate::to_string() const
{
        std::string out(delsplit::to_string(id));
        if (!matched)
                out += " violated";
        return out;
}

unsigned delete_nim_grundy(Heap x, Heap y) noexcept { return nt::or_plus_one_valuation(x, y); }

namespace {

Classification verdict(bool holds, ConditionId id) { return {holds ? Outcome::P : Outcome::N, {id, holds}, {}}; }

bool all_same_v2(std::span<const Heap> heaps)
{
        unsigned first = nt::v2(heaps[0]);
        return std::all_of(heaps.begin(), heaps.end(), [first](Heap h) { return nt::v2(h) == first; });
}

Classification classify_fractional(unsigned k, unsigned m, std::span<const Heap> heaps)
{
        // heaps are sorted; the pivot is z_{(k-1)m+1} in one-based terms
        std::size_t pivot = static_cast<std::size_t>(k - 1) * m;
        for (std::size_t i = 0; i <= pivot; ++i)
                if (nt::is_k_evenoid(heaps[i], k))
                        return verdict(false, ConditionId::KFracA);
        Heap bound = nt::smallest_power_above(heaps[pivot], k).value;
        for (std::size_t i = pivot + 1; i < heaps.size(); ++i)
                if (nt::is_k_evenoid(heaps[i], k) && heaps[i] < bound)
                        return verdict(false, ConditionId::KFracB);
        return verdict(true, ConditionId::KFracAB);
}

// Sum of I_i over the given heaps.
unsigned digit_sum(std::initializer_list<Heap> heaps, unsigned i)
{
        unsigned s = 0;
        for (Heap h : heaps)
                s += nt::digit(h, i);
        return s;
}

Certificate case4(Heap w, Heap x, Heap y, unsigned b, unsigned c, unsigned d)
{
        using enum ConditionId;
        if (digit_sum({w, x, y}, d + 1) != 0)
                return {Single4Case4A, false};
        for (unsigned j = c + 2; j <= d; ++j)
                if (digit_sum({w, x, y}, j) < 2)
                        return {Single4Case4B, false};
        if (nt::digit(w, c + 1) != 1 || nt::digit(x, c + 1) != 1)
                return {Single4Case4C, false};
        for (unsigned k = b + 2; k <= c; ++k)
                if (digit_sum({w, x}, k) < 1)
                        return {Single4Case4D, false};
        if (nt::digit(w, b + 1) != 1)
                return {Single4Case4E, false};
        return {Single4Case4, true};
}

Certificate case5(Heap w, Heap x, Heap y, Heap z, unsigned b, unsigned c, unsigned d)
{
        using enum ConditionId;
        for (unsigned i = d + 2; i <= 64; ++i) {
                unsigned s = digit_sum({w, x, y, z}, i);
                if (s == 1 || s == 2)
                        return {Single4Case5A, false};
        }
        if (digit_sum({w, x, y}, d + 1) != 3)
                return {Single4Case5B, false};
        for (unsigned j = c + 2; j <= d; ++j)
                if (digit_sum({w, x, y}, j) < 2)
                        return {Single4Case5C, false};
        if (nt::digit(w, c + 1) != 1 || nt::digit(x, c + 1) != 1)
                return {Single4Case5D, false};
        for (unsigned k = b + 2; k <= c; ++k)
                if (digit_sum({w, x}, k) < 1)
                        return {Single4Case5E, false};
        if (nt::digit(w, b + 1) != 1)
                return {Single4Case5F, false};
        return {Single4Case5, true};
}

} // namespace

Certificate single4_certificate(Heap w, Heap x, Heap y, Heap z)
{
        using enum ConditionId;
        unsigned a = nt::v2(w), b = nt::v2(x), c = nt::v2(y), d = nt::v2(z);
        if (!(a <= b && b <= c && c <= d))
                throw Error(Errc::DomainError, "single4_certificate expects heaps ordered by 2-adic valuation");

        if (a == d)
                return {Single4Case1, true};
        if (a < b && b == d)
                return nt::digit(w, d + 1) == 0 ? Certificate{Single4Case2, true}
                                                : Certificate{Single4Case2A, false};
        if (a < b && b < c && c == d) {
                if (nt::digit(w, d + 1) != 0 || nt::digit(x, d + 1) != 0)
                        return {Single4Case3A, false};
                for (unsigned k = b + 2; k <= d; ++k)
                        if (digit_sum({w, x}, k) < 1)
                                return {Single4Case3B, false};
                if (nt::digit(w, b + 1) != 1)
                        return {Single4Case3C, false};
                return {Single4Case3, true};
        }
        if (a < b && b < c && c < d) {
                Certificate four = case4(w, x, y, b, c, d);
                if (four.matched)
                        return four;
                Certificate five = case5(w, x, y, z, b, c, d);
                if (five.matched)
                        return five;
                // report against the case whose top-digit requirement fits
                return digit_sum({w, x, y}, d + 1) == 0 ? four : five;
        }
        return {Single4Pattern, false};
}

std::array<Heap, 4> single4_order(const Position& p)
{
        std::array<Heap, 4> out{p[0], p[1], p[2], p[3]};
        // canonical input is ascending, so a stable sort on v2 breaks ties by size then index
        std::stable_sort(out.begin(), out.end(), [](Heap l, Heap r) { return nt::v2(l) < nt::v2(r); });
        return out;
}

Classification classify(const Ruleset& rules, const Position& p)
{
        check_arity(rules, p);
        auto heaps = p.heaps();
        switch (rules.family()) {
        case Family::DeleteNim: {
                auto c = verdict(heaps[0] % 2 == 0 && heaps[1] % 2 == 0, ConditionId::DeleteNimEven);
                c.grundy = delete_nim_grundy(heaps[0], heaps[1]);
                return c;
        }
        case Family::Vdn: return verdict(heaps[0] % 2 == 1 && heaps[1] % 2 == 1, ConditionId::VdnOdd);
        case Family::Abo: {
                bool star = std::all_of(heaps.begin(), heaps.end(),
                                        [&](Heap h) { return nt::is_k_oddoid(h, rules.heap_count()); });
                return verdict(star, ConditionId::AboStar);
        }
        case Family::Half:
        case Family::KFrac: return classify_fractional(rules.k(), rules.m(), heaps);
        case Family::Nmth:
                if (rules.heap_count() % 2 == 0)
                        return verdict(std::all_of(heaps.begin(), heaps.end(), [](Heap h) { return h % 2 == 1; }),
                                       ConditionId::NmthEvenAllOdd);
                return verdict(all_same_v2(heaps), ConditionId::NmthOddEqualV2);
        case Family::Single:
                switch (rules.heap_count()) {
                case 2: return verdict(heaps[0] % 2 == 1 && heaps[1] % 2 == 1, ConditionId::VdnOdd);
                case 3: return verdict(all_same_v2(heaps), ConditionId::Single3EqualV2);
                case 4: {
                        auto [w, x, y, z] = single4_order(p);
                        auto cert = single4_certificate(w, x, y, z);
                        return verdict(cert.matched, cert.id);
                }
                default:
                        throw Error(Errc::Unsupported,
                                    "single-delete Nim is characterized only for n <= 4, got " + rules.code());
                }
        }
        throw Error(Errc::InternalContradiction, "unhandled ruleset family");
}

} // namespace delsplit
