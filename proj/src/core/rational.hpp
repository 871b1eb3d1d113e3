#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

namespace palab {

// Exact rationals and big integers. mpq_class keeps values canonicalized
// (lowest terms, positive denominator), which the file formats rely on.
using Rat = mpq_class;
using Int = mpz_class;

// Accepts "num/den" or a bare integer "num". Rejects zero denominators,
// whitespace, and trailing garbage.
std::optional<Rat> rat_parse(const std::string& text);

// Always "num/den", canonical form (so integers render as "k/1").
std::string rat_render(const Rat& q);

// q^e with integer e; e < 0 requires q != 0.
Rat rat_pow(const Rat& q, long e);

Int int_pow(const Int& base, unsigned long e);

inline Rat rat_of(long num, long den = 1) {
    Rat q(num, den);
    q.canonicalize();
    return q;
}

std::string int_render(const Int& v);
std::optional<Int> int_parse(const std::string& text);

} // namespace palab
