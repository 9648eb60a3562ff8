#pragma once

#include "slnz/subgroups.hpp"

#include <random>

namespace slnz::testutil {

/// Random word over the symmetric elementary generators.
inline SLMatrix random_word(int n, int len, std::mt19937_64& rng) {
    auto gens = elementary_generators(n);
    std::uniform_int_distribution<std::size_t> pick(0, gens.size() - 1);
    SLMatrix m = SLMatrix::identity(n);
    for (int i = 0; i < len; ++i) m = m * gens[pick(rng)];
    return m;
}

}  // namespace slnz::testutil
