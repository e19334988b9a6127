#include "delsplit/numtheory.hpp"

#include <bit>
#include <limits>
#include <string>

namespace delsplit::nt {

namespace {

[[noreturn]] void domain(const std::string& what) { throw Error(Errc::DomainError, what); }

Heap modulus(unsigned k)
{
        if (k < 2)
                domain("k must be at least 2, got " + std::to_string(k));
        return static_cast<Heap>(k) * (k - 1);
}

// y = alpha*k(k-1) + beta with k <= beta <= k(k-1); requires y k-evenoid, y >= k.
std::pair<Heap, Heap> evenoid_decompose(Heap y, Heap mod)
{
        Heap r = y % mod;
        if (r == 0)
                return {y / mod - 1, mod};
        return {y / mod, r};
}

} // namespace

unsigned v2(Heap z)
{
        if (z == 0)
                domain("v2(0) is undefined");
        return static_cast<unsigned>(std::countr_zero(z));
}

unsigned digit(Heap z, unsigned k)
{
        if (k == 0)
                domain("digit positions start at 1");
        if (k > 64)
                return 0;
        return static_cast<unsigned>((z >> (k - 1)) & 1u);
}

unsigned or_plus_one_valuation(Heap x, Heap y) noexcept
{
        // (x|y)+1 clears the trailing ones of x|y and sets the next bit.
        return static_cast<unsigned>(std::countr_one(x | y));
}

bool is_k_oddoid(Heap z, unsigned k)
{
        Heap mod = modulus(k);
        if (z == 0)
                domain("k-oddoid parity is defined for positive integers only");
        Heap r = z % mod;
        return r >= 1 && r <= k - 1;
}

PowerAbove smallest_power_above(Heap z, unsigned k)
{
        if (k < 2)
                domain("power base must be at least 2");
        unsigned s = 0;
        Heap power = 1;
        while (power <= z) {
                if (power > std::numeric_limits<Heap>::max() / k)
                        return {s + 1, std::numeric_limits<Heap>::max()};
                power *= k;
                ++s;
        }
        return {s, power};
}

std::pair<Heap, Heap> split_equal_valuation(Heap z, unsigned j)
{
        if (z == 0 || j >= v2(z))
                domain("split_equal_valuation requires j < v2(z)");
        Heap low = Heap{1} << j;
        return {z - low, low};
}

SplitParts split_small(Heap x, unsigned k)
{
        Heap mod = modulus(k);
        if (x < k || x > mod)
                domain("split_small requires k <= x <= k(k-1)");
        Heap p = x / k;
        Heap q = x % k;
        SplitParts parts;
        parts.reserve(k);
        if (p < k - 1) {
                parts.insert(parts.end(), q, p + 1);
                parts.insert(parts.end(), k - q, p);
        } else {
                parts.assign(k, p);
        }
        return parts;
}

SplitParts split_evenoid_bounded(Heap y, unsigned k, unsigned s)
{
        Heap mod = modulus(k);
        if (y < k)
                domain("split_evenoid_bounded requires y >= k");
        if (is_k_oddoid(y, k))
                domain("split_evenoid_bounded requires a k-evenoid input");
        auto above = smallest_power_above(y, k);
        if (s < above.exponent)
                domain("split_evenoid_bounded requires y < k^s");

        auto [alpha, beta] = evenoid_decompose(y, mod);
        SplitParts parts = split_small(beta, k);
        Heap base = alpha / k;
        Heap extra = alpha % k;
        for (unsigned i = 0; i < k; ++i) {
                Heap alpha_i = base + (i < extra ? 1 : 0);
                parts[i] += alpha_i * mod;
        }
        return parts;
}

SplitParts split_keep_tail(Heap z, unsigned k)
{
        Heap mod = modulus(k);
        if (z < k)
                domain("split_keep_tail requires z >= k");
        SplitParts parts;
        if (is_k_oddoid(z, k)) {
                parts.assign(k - 1, 1);
                parts.push_back(z - (k - 1));
                return parts;
        }
        auto [alpha, beta] = evenoid_decompose(z, mod);
        parts = split_small(beta, k);
        parts.back() += alpha * mod;
        return parts;
}

} // namespace delsplit::nt
