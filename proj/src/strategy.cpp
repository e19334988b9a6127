#include "delsplit/strategy.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <tuple>

#include "delsplit/numtheory.hpp"

namespace delsplit {

namespace {

struct Group {
        Heap value;
        std::size_t first;
        std::size_t count;
};

std::vector<Group> groups_of(const Position& p)
{
        std::vector<Group> groups;
        for (std::size_t i = 0; i < p.size(); ++i) {
                if (!groups.empty() && groups.back().value == p[i])
                        ++groups.back().count;
                else
                        groups.push_back({p[i], i, 1});
        }
        return groups;
}

using Partition = std::vector<Heap>;

void gen_partitions(Heap remaining, unsigned parts_left, Heap min_next, Partition& current,
                    std::vector<Partition>& out)
{
        if (parts_left == 1) {
                if (remaining >= min_next) {
                        current.push_back(remaining);
                        out.push_back(current);
                        current.pop_back();
                }
                return;
        }
        for (Heap v = min_next; v <= remaining / parts_left; ++v) {
                current.push_back(v);
                gen_partitions(remaining - v, parts_left - 1, v, current, out);
                current.pop_back();
        }
}

// Non-decreasing partitions of total into exactly q parts, each >= min_part.
const std::vector<Partition>& partitions(Heap total, unsigned q, Heap min_part)
{
        thread_local std::map<std::tuple<Heap, unsigned, Heap>, std::vector<Partition>> cache;
        auto key = std::make_tuple(total, q, min_part);
        auto it = cache.find(key);
        if (it != cache.end())
                return it->second;
        std::vector<Partition> out;
        Partition current;
        gen_partitions(total, q, min_part, current, out);
        return cache.emplace(key, std::move(out)).first->second;
}

struct Shape {
        std::vector<std::size_t> del;   // deleted heaps per group
        std::vector<std::size_t> split; // split heaps per group
        unsigned arity = 2;
        Heap min_part = 1;
        Heap removed = 0; // tokens taken from a heap before it is split
};

// Every count vector bounded by caps with the given sum.
template <class F>
void choose_counts(const std::vector<std::size_t>& caps, std::size_t total, std::vector<std::size_t>& out,
                   std::size_t at, std::size_t room, F&& f)
{
        if (at == caps.size()) {
                if (total == 0)
                        f();
                return;
        }
        room -= caps[at];
        std::size_t lo = total > room ? total - room : 0;
        std::size_t hi = std::min(caps[at], total);
        for (std::size_t c = lo; c <= hi; ++c) {
                out[at] = c;
                choose_counts(caps, total - c, out, at + 1, room, f);
        }
        out[at] = 0;
}

template <class F>
void choose_counts(const std::vector<std::size_t>& caps, std::size_t total, std::vector<std::size_t>& out, F&& f)
{
        std::size_t room = std::accumulate(caps.begin(), caps.end(), std::size_t{0});
        if (room < total)
                return;
        choose_counts(caps, total, out, 0, room, f);
}

// Chooses, per group, a multiset of partitions for the heaps split there.
template <class Visit>
void choose_parts(const std::vector<Group>& groups, const Shape& shape, std::size_t g, std::size_t left_in_group,
                  std::size_t min_index, std::vector<const Partition*>& chosen, Visit& visit)
{
        while (g < groups.size() && left_in_group == 0) {
                ++g;
                if (g < groups.size())
                        left_in_group = shape.split[g];
                min_index = 0;
        }
        if (g >= groups.size()) {
                visit(groups, shape, chosen);
                return;
        }
        const auto& options = partitions(groups[g].value - shape.removed, shape.arity, shape.min_part);
        for (std::size_t i = min_index; i < options.size(); ++i) {
                chosen.push_back(&options[i]);
                choose_parts(groups, shape, g, left_in_group - 1, i, chosen, visit);
                chosen.pop_back();
        }
}

template <class Visit>
void emit(const std::vector<Group>& groups, const Shape& shape, Visit& visit)
{
        std::vector<const Partition*> chosen;
        choose_parts(groups, shape, 0, groups.empty() ? 0 : shape.split[0], 0, chosen, visit);
}

template <class Visit>
void enumerate(const Ruleset& rules, const Position& p, Visit&& visit)
{
        check_arity(rules, p);
        auto groups = groups_of(p);
        const std::size_t g_count = groups.size();
        Shape shape;
        shape.del.assign(g_count, 0);
        shape.split.assign(g_count, 0);

        std::vector<std::size_t> counts(g_count);
        for (std::size_t j = 0; j < g_count; ++j)
                counts[j] = groups[j].count;

        switch (rules.family()) {
        case Family::DeleteNim: {
                shape.min_part = 0;
                shape.removed = 1;
                for (std::size_t j = 0; j < g_count; ++j) {
                        if (groups[j].value == 0)
                                continue;
                        std::fill(shape.del.begin(), shape.del.end(), 0);
                        std::fill(shape.split.begin(), shape.split.end(), 0);
                        shape.split[j] = 1;
                        if (groups[j].count == 2)
                                shape.del[j] = 1;
                        else
                                shape.del[1 - j] = 1;
                        emit(groups, shape, visit);
                }
                return;
        }
        case Family::Vdn:
        case Family::Abo:
        case Family::Half:
        case Family::KFrac: {
                shape.arity = rules.k();
                std::vector<std::size_t> caps(g_count);
                for (std::size_t j = 0; j < g_count; ++j)
                        caps[j] = groups[j].value >= rules.k() ? groups[j].count : 0;
                choose_counts(caps, rules.m(), shape.split, [&] {
                        for (std::size_t j = 0; j < g_count; ++j)
                                shape.del[j] = counts[j] - shape.split[j];
                        emit(groups, shape, visit);
                });
                return;
        }
        case Family::Nmth:
        case Family::Single: {
                std::size_t max_delete = rules.family() == Family::Single ? 1 : rules.heap_count() / 2;
                std::vector<std::size_t> caps(g_count);
                for (std::size_t d = 1; d <= max_delete; ++d) {
                        choose_counts(counts, d, shape.del, [&] {
                                for (std::size_t j = 0; j < g_count; ++j)
                                        caps[j] = groups[j].value >= 2 ? counts[j] - shape.del[j] : 0;
                                choose_counts(caps, d, shape.split, [&] { emit(groups, shape, visit); });
                        });
                }
                return;
        }
        }
}

Position result_of(const std::vector<Group>& groups, const Shape& shape, const std::vector<const Partition*>& chosen)
{
        std::vector<Heap> heaps;
        for (std::size_t j = 0; j < groups.size(); ++j)
                heaps.insert(heaps.end(), groups[j].count - shape.del[j] - shape.split[j], groups[j].value);
        for (const Partition* parts : chosen)
                heaps.insert(heaps.end(), parts->begin(), parts->end());
        return Position::from_heaps(std::move(heaps));
}

MoveRecord record_of(const std::vector<Group>& groups, const Shape& shape,
                     const std::vector<const Partition*>& chosen)
{
        MoveRecord record;
        std::size_t next_part = 0;
        for (std::size_t j = 0; j < groups.size(); ++j) {
                std::size_t idx = groups[j].first;
                for (std::size_t c = 0; c < shape.del[j]; ++c)
                        record.deleted.push_back(idx++);
                for (std::size_t c = 0; c < shape.split[j]; ++c)
                        record.splits.push_back({idx++, *chosen[next_part++]});
        }
        return record;
}

[[noreturn]] void illegal(const std::string& reason, const std::string& what)
{
        throw Error(Errc::IllegalMove, "illegal move: " + what, reason);
}

Heap checked_sum(const std::vector<Heap>& parts)
{
        Heap sum = 0;
        for (Heap part : parts) {
                if (part > std::numeric_limits<Heap>::max() - sum)
                        illegal("part-sum-mismatch", "part sizes overflow");
                sum += part;
        }
        return sum;
}

} // namespace

MoveKey move_key(const Position& p, const MoveRecord& m)
{
        MoveKey key;
        for (auto i : m.deleted)
                key.deleted.push_back(p[i]);
        std::sort(key.deleted.begin(), key.deleted.end());
        for (const auto& s : m.splits) {
                auto parts = s.parts;
                std::sort(parts.begin(), parts.end());
                key.splits.emplace_back(p[s.heap], std::move(parts));
        }
        std::sort(key.splits.begin(), key.splits.end());
        return key;
}

std::vector<MoveChoice> legal_moves(const Ruleset& rules, const Position& p)
{
        std::vector<std::pair<MoveKey, MoveChoice>> keyed;
        enumerate(rules, p, [&](const std::vector<Group>& groups, const Shape& shape,
                                const std::vector<const Partition*>& chosen) {
                MoveChoice choice{record_of(groups, shape, chosen), result_of(groups, shape, chosen)};
                keyed.emplace_back(move_key(p, choice.record), std::move(choice));
        });
        std::sort(keyed.begin(), keyed.end(), [](const auto& l, const auto& r) {
                return std::tie(l.second.result, l.first) < std::tie(r.second.result, r.first);
        });
        std::vector<MoveChoice> out;
        out.reserve(keyed.size());
        for (auto& entry : keyed)
                out.push_back(std::move(entry.second));
        return out;
}

std::vector<Position> successors(const Ruleset& rules, const Position& p)
{
        std::vector<Position> out;
        enumerate(rules, p, [&](const std::vector<Group>& groups, const Shape& shape,
                                const std::vector<const Partition*>& chosen) {
                out.push_back(result_of(groups, shape, chosen));
        });
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
}

Position apply(const Ruleset& rules, const Position& p, const MoveRecord& m)
{
        check_arity(rules, p);
        const std::size_t n = p.size();
        std::vector<char> used(n, 0);
        for (auto i : m.deleted) {
                if (i >= n)
                        illegal("bad-index", "deleted heap index " + std::to_string(i) + " out of range");
                if (used[i])
                        illegal("duplicate-index", "heap " + std::to_string(i) + " deleted twice");
                used[i] = 1;
        }
        for (const auto& s : m.splits) {
                if (s.heap >= n)
                        illegal("bad-index", "split heap index " + std::to_string(s.heap) + " out of range");
                if (used[s.heap] == 1)
                        illegal("split-deleted-heap", "heap " + std::to_string(s.heap) + " is both deleted and split");
                if (used[s.heap] == 2)
                        illegal("duplicate-index", "heap " + std::to_string(s.heap) + " split twice");
                used[s.heap] = 2;
        }

        const std::size_t deleted = m.deleted.size();
        const std::size_t split = m.splits.size();
        unsigned arity = 2;
        bool cardinality_ok = false;
        switch (rules.family()) {
        case Family::DeleteNim:
        case Family::Single: cardinality_ok = deleted == 1 && split == 1; break;
        case Family::Nmth: cardinality_ok = deleted >= 1 && deleted <= n / 2 && split == deleted; break;
        case Family::Vdn:
        case Family::Abo:
        case Family::Half:
        case Family::KFrac:
                arity = rules.k();
                cardinality_ok = deleted == static_cast<std::size_t>(rules.k() - 1) * rules.m() && split == rules.m();
                break;
        }
        if (!cardinality_ok)
                illegal("bad-cardinality", rules.code() + " does not allow deleting " + std::to_string(deleted) +
                                                   " and splitting " + std::to_string(split) + " heaps");

        const bool token_removal = rules.family() == Family::DeleteNim;
        std::vector<Heap> heaps;
        heaps.reserve(n);
        for (std::size_t i = 0; i < n; ++i)
                if (!used[i])
                        heaps.push_back(p[i]);
        for (const auto& s : m.splits) {
                if (s.parts.size() != arity)
                        illegal("bad-part-count", "each split must produce " + std::to_string(arity) + " heaps");
                Heap size = p[s.heap];
                if (token_removal) {
                        if (size == 0)
                                illegal("empty-heap", "cannot take a token from an empty heap");
                        --size;
                }
                for (Heap part : s.parts)
                        if (part == 0 && !token_removal)
                                illegal("empty-part", "split parts must be non-empty");
                if (checked_sum(s.parts) != size)
                        illegal("part-sum-mismatch", "parts of heap " + std::to_string(s.heap) + " sum to " +
                                                             std::to_string(checked_sum(s.parts)) + ", expected " +
                                                             std::to_string(size));
                heaps.insert(heaps.end(), s.parts.begin(), s.parts.end());
        }
        return Position::from_heaps(std::move(heaps));
}

namespace {

MoveChoice finish(const Ruleset& rules, const Position& p, MoveRecord record)
{
        std::sort(record.deleted.begin(), record.deleted.end());
        std::sort(record.splits.begin(), record.splits.end(),
                  [](const Split& l, const Split& r) { return l.heap < r.heap; });
        Position result = apply(rules, p, record);
        if (classify(rules, result).outcome != Outcome::P)
                throw Error(Errc::InternalContradiction, "constructed move from " + p.to_string() + " reaches " +
                                                                 result.to_string() + ", which is not a P-position");
        return {std::move(record), std::move(result)};
}

Split equal_valuation_split(const Position& p, std::size_t i, unsigned valuation)
{
        auto [hi, lo] = nt::split_equal_valuation(p[i], valuation);
        return {i, {hi, lo}};
}

MoveChoice fractional_move(const Ruleset& rules, const Position& p)
{
        const unsigned k = rules.k();
        const std::size_t n = p.size();
        const std::size_t pivot = static_cast<std::size_t>(k - 1) * rules.m();
        MoveRecord record;
        std::vector<char> split(n, 0);

        std::size_t offender = n;
        for (std::size_t i = 0; i <= pivot; ++i)
                if (nt::is_k_evenoid(p[i], k)) {
                        offender = i;
                        break;
                }

        if (offender != n) {
                // an evenoid heap among the smallest (k-1)m+1: split it small, split the top m-1 heaps
                unsigned s = nt::smallest_power_above(p[offender], k).exponent;
                record.splits.push_back({offender, nt::split_evenoid_bounded(p[offender], k, s)});
                split[offender] = 1;
                for (std::size_t j = pivot + 1; j < n; ++j) {
                        record.splits.push_back({j, nt::split_keep_tail(p[j], k)});
                        split[j] = 1;
                }
        } else {
                auto bound = nt::smallest_power_above(p[pivot], k);
                for (std::size_t i = pivot + 1; i < n; ++i)
                        if (nt::is_k_evenoid(p[i], k) && p[i] < bound.value) {
                                offender = i;
                                break;
                        }
                for (std::size_t j = pivot; j < n; ++j) {
                        if (j == offender)
                                record.splits.push_back({j, nt::split_evenoid_bounded(p[j], k, bound.exponent)});
                        else
                                record.splits.push_back({j, nt::split_keep_tail(p[j], k)});
                        split[j] = 1;
                }
        }
        for (std::size_t i = 0; i < n; ++i)
                if (!split[i])
                        record.deleted.push_back(i);
        return finish(rules, p, std::move(record));
}

MoveChoice nmth_even_move(const Ruleset& rules, const Position& p)
{
        const std::size_t n = p.size();
        std::vector<std::size_t> evens, odds;
        for (std::size_t i = 0; i < n; ++i)
                (p[i] % 2 == 0 ? evens : odds).push_back(i);

        MoveRecord record;
        if (evens.size() >= n / 2) {
                for (std::size_t e = 0; e < n / 2; ++e)
                        record.splits.push_back(equal_valuation_split(p, evens[e], 0));
                for (std::size_t e = n / 2; e < evens.size(); ++e)
                        record.deleted.push_back(evens[e]);
                record.deleted.insert(record.deleted.end(), odds.begin(), odds.end());
        } else {
                for (auto i : evens)
                        record.splits.push_back(equal_valuation_split(p, i, 0));
                // drop the largest odd heaps
                record.deleted.assign(odds.end() - static_cast<std::ptrdiff_t>(evens.size()), odds.end());
        }
        return finish(rules, p, std::move(record));
}

MoveChoice nmth_odd_move(const Ruleset& rules, const Position& p)
{
        const std::size_t n = p.size();
        const std::size_t half = (n - 1) / 2;
        unsigned v = nt::v2(p[0]);
        for (auto h : p.heaps())
                v = std::min(v, nt::v2(h));

        std::vector<std::size_t> low, high;
        for (std::size_t i = 0; i < n; ++i)
                (nt::v2(p[i]) == v ? low : high).push_back(i);

        MoveRecord record;
        // minimum-valuation heaps are deleted from the largest down
        auto delete_low = [&](std::size_t count) {
                for (std::size_t c = 0; c < count; ++c)
                        record.deleted.push_back(low[low.size() - 1 - c]);
        };
        if (high.size() <= half) {
                for (auto i : high)
                        record.splits.push_back(equal_valuation_split(p, i, v));
                delete_low(high.size());
        } else {
                std::stable_sort(high.begin(), high.end(), [&](std::size_t l, std::size_t r) {
                        return std::make_pair(nt::v2(p[l]), p[l]) > std::make_pair(nt::v2(p[r]), p[r]);
                });
                for (std::size_t c = 0; c < half; ++c)
                        record.splits.push_back(equal_valuation_split(p, high[c], v));
                for (std::size_t c = half; c < high.size(); ++c)
                        record.deleted.push_back(high[c]);
                delete_low(n - 1 - high.size());
        }
        return finish(rules, p, std::move(record));
}

MoveChoice delete_nim_move(const Ruleset& rules, const Position& p)
{
        std::size_t odd = p[0] % 2 == 1 ? 0 : 1;
        MoveRecord record{{1 - odd}, {{odd, {0, p[odd] - 1}}}};
        return finish(rules, p, std::move(record));
}

} // namespace

std::optional<MoveChoice> winning_move(const Ruleset& rules, const Position& p)
{
        if (classify(rules, p).outcome == Outcome::P)
                return std::nullopt;

        switch (rules.family()) {
        case Family::DeleteNim: return delete_nim_move(rules, p);
        case Family::Vdn:
        case Family::Abo:
        case Family::Half:
        case Family::KFrac: return fractional_move(rules, p);
        case Family::Nmth: return rules.heap_count() % 2 == 0 ? nmth_even_move(rules, p) : nmth_odd_move(rules, p);
        case Family::Single:
                switch (rules.heap_count()) {
                case 2: return fractional_move(Ruleset::vdn(), p);
                case 3: return nmth_odd_move(Ruleset::nmth(3), p);
                default: {
                        // no constructive proof available: search for a certificate
                        for (auto& choice : legal_moves(rules, p))
                                if (classify(rules, choice.result).outcome == Outcome::P)
                                        return std::move(choice);
                        throw Error(Errc::InternalContradiction,
                                    "N-position " + p.to_string() + " has no option classified P");
                }
                }
        }
        throw Error(Errc::InternalContradiction, "unhandled ruleset family");
}

std::string describe(const Position& p, const MoveRecord& m)
{
        std::string out = "delete ";
        for (std::size_t i = 0; i < m.deleted.size(); ++i) {
                if (i)
                        out += ',';
                out += std::to_string(p[m.deleted[i]]);
        }
        out += "; split ";
        for (std::size_t i = 0; i < m.splits.size(); ++i) {
                if (i)
                        out += ", ";
                out += std::to_string(p[m.splits[i].heap]) + " -> ";
                for (std::size_t j = 0; j < m.splits[i].parts.size(); ++j) {
                        if (j)
                                out += '+';
                        out += std::to_string(m.splits[i].parts[j]);
                }
        }
        return out;
}

} // namespace delsplit
