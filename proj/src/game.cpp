#include "delsplit/game.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <numeric>

namespace delsplit {

std::string_view to_string(Errc code)
{
        switch (code) {
        case Errc::WrongArity: return "wrong-arity";
        case Errc::IllegalHeapSize: return "illegal-heap-size";
        case Errc::DomainError: return "domain-error";
        case Errc::Unsupported: return "unsupported";
        case Errc::IllegalMove: return "illegal-move";
        case Errc::LimitExceeded: return "limit-exceeded";
        case Errc::InternalContradiction: return "internal-contradiction";
        case Errc::ParseError: return "parse-error";
        }
        return "unknown";
}

namespace {

constexpr unsigned kMaxHeapCount = 64;

void require(bool ok, const std::string& what)
{
        if (!ok)
                throw Error(Errc::DomainError, what);
}

unsigned parse_uint(std::string_view text, std::string_view code)
{
        unsigned value = 0;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size())
                throw Error(Errc::ParseError, "bad ruleset parameter in '" + std::string(code) + "'");
        return value;
}

} // namespace

Ruleset Ruleset::delete_nim() { return {Family::DeleteNim, 2, 0, 0}; }

Ruleset Ruleset::vdn() { return {Family::Vdn, 2, 2, 1}; }

Ruleset Ruleset::abo(unsigned n)
{
        require(n >= 2 && n <= kMaxHeapCount, "abo requires 2 <= n <= 64");
        return {Family::Abo, n, n, 1};
}

Ruleset Ruleset::nmth(unsigned n)
{
        require(n >= 2 && n <= kMaxHeapCount, "nmth requires 2 <= n <= 64");
        return {Family::Nmth, n, 0, 0};
}

Ruleset Ruleset::half(unsigned m)
{
        require(m >= 1 && 2 * m <= kMaxHeapCount, "half requires 1 <= m <= 32");
        return {Family::Half, 2 * m, 2, m};
}

Ruleset Ruleset::kfrac(unsigned k, unsigned m)
{
        require(k >= 2 && m >= 1 && k <= kMaxHeapCount && m <= kMaxHeapCount && k * m <= kMaxHeapCount,
                "kfrac requires k >= 2, m >= 1, k*m <= 64");
        return {Family::KFrac, k * m, k, m};
}

Ruleset Ruleset::single(unsigned n)
{
        require(n >= 2 && n <= kMaxHeapCount, "single requires 2 <= n <= 64");
        return {Family::Single, n, 0, 0};
}

bool Ruleset::is_fractional() const noexcept
{
        switch (family_) {
        case Family::Vdn:
        case Family::Abo:
        case Family::Half:
        case Family::KFrac: return true;
        default: return false;
        }
}

std::string Ruleset::code() const
{
        switch (family_) {
        case Family::DeleteNim: return "delete-nim";
        case Family::Vdn: return "vdn";
        case Family::Abo: return "abo:" + std::to_string(n_);
        case Family::Nmth: return "nmth:" + std::to_string(n_);
        case Family::Half: return "half:" + std::to_string(m_);
        case Family::KFrac: return "kfrac:" + std::to_string(k_) + "," + std::to_string(m_);
        case Family::Single: return "single:" + std::to_string(n_);
        }
        return {};
}

Ruleset Ruleset::parse(std::string_view text)
{
        if (text == "delete-nim")
                return delete_nim();
        if (text == "vdn")
                return vdn();

        auto colon = text.find(':');
        if (colon == std::string_view::npos)
                throw Error(Errc::ParseError, "unknown ruleset '" + std::string(text) + "'");
        auto name = text.substr(0, colon);
        auto args = text.substr(colon + 1);

        if (name == "kfrac") {
                auto comma = args.find(',');
                if (comma == std::string_view::npos)
                        throw Error(Errc::ParseError, "kfrac expects 'kfrac:k,m'");
                return kfrac(parse_uint(args.substr(0, comma), text), parse_uint(args.substr(comma + 1), text));
        }
        unsigned value = parse_uint(args, text);
        if (name == "abo")
                return abo(value);
        if (name == "nmth")
                return nmth(value);
        if (name == "half")
                return half(value);
        if (name == "single")
                return single(value);
        throw Error(Errc::ParseError, "unknown ruleset '" + std::string(text) + "'");
}

Position Position::canonicalize(std::span<const std::int64_t> heaps, const Ruleset& rules)
{
        if (heaps.size() != rules.heap_count())
                throw Error(Errc::WrongArity, rules.code() + " expects " + std::to_string(rules.heap_count()) +
                                                  " heaps, got " + std::to_string(heaps.size()));
        std::vector<Heap> out;
        out.reserve(heaps.size());
        for (auto h : heaps) {
                if (h < 0 || static_cast<Heap>(h) < rules.min_heap())
                        throw Error(Errc::IllegalHeapSize,
                                    "heap size " + std::to_string(h) + " is not allowed in " + rules.code());
                out.push_back(static_cast<Heap>(h));
        }
        return from_heaps(std::move(out));
}

Position Position::from_heaps(std::vector<Heap> heaps)
{
        std::sort(heaps.begin(), heaps.end());
        return Position(std::move(heaps));
}

Heap Position::total() const noexcept
{
        return std::accumulate(heaps_.begin(), heaps_.end(), Heap{0});
}

std::string Position::to_list() const
{
        std::string out;
        for (std::size_t i = 0; i < heaps_.size(); ++i) {
                if (i)
                        out += ',';
                out += std::to_string(heaps_[i]);
        }
        return out;
}

std::string Position::to_string() const { return "<" + to_list() + ">"; }

std::size_t PositionHash::operator()(const Position& p) const noexcept
{
        // FNV-1a over the heap words
        std::uint64_t h = 1469598103934665603ull;
        for (auto v : p.heaps()) {
                h ^= v;
                h *= 1099511628211ull;
        }
        return static_cast<std::size_t>(h ^ (h >> 32));
}

void check_arity(const Ruleset& rules, const Position& p)
{
        if (p.size() != rules.heap_count())
                throw Error(Errc::WrongArity, rules.code() + " expects " + std::to_string(rules.heap_count()) +
                                                  " heaps, got " + std::to_string(p.size()));
}

bool is_terminal(const Ruleset& rules, const Position& p)
{
        check_arity(rules, p);
        auto heaps = p.heaps();
        auto at_least = [&](Heap bound) {
                return static_cast<unsigned>(std::count_if(heaps.begin(), heaps.end(),
                                                           [bound](Heap h) { return h >= bound; }));
        };
        switch (rules.family()) {
        case Family::DeleteNim: return heaps[0] == 0 && heaps[1] == 0;
        case Family::Nmth:
        case Family::Single: return at_least(2) == 0;
        case Family::Vdn:
        case Family::Abo:
        case Family::Half:
        case Family::KFrac: return at_least(rules.k()) < rules.m();
        }
        return true;
}

} // namespace delsplit
