#pragma once

/**
 * @file verify.hpp
 * @brief Scenario checks behind `taublab verify`. Each check records the
 * exact values it compared.
 */

#include "taublab/lattice.hpp"
#include "taublab/rational.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace taublab::verify {

struct Check {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct Report {
    std::string scenario;
    std::vector<Check> checks;
    bool passed() const;
};

/// Uniform 2-cycle: constants 2, 1, 1 at 1/2, 2/3, 3/4 and the value set {0, 2/3, 1}.
Report example1();
/// Uniform N-cycle on either side of (2N - 2) / (2N - 1).
Report jump(std::size_t n);
/// Identity systems have index 1 and constant 1.
Report index_collapse();
/// Random lattice witnesses moved into cycles of length >= 8(N + 1).
Report transfer(std::uint64_t seed, std::size_t count);
/// One-sided ceilings 1/alpha, the interval value at k = 60 and the 2-cycle constants.
Report one_sided(std::uint64_t seed, std::size_t count);
/// 1-D ceiling 2/alpha - 1 on all subsets of {0..11} and on random sets.
Report ceiling_1d(std::uint64_t seed, std::size_t count);

/// Random nonempty subset of {0, ..., span - 1} with at most max_points points.
LatticeSet random_line_set(std::mt19937_64& rng, std::int64_t span, std::size_t max_points);
/// Random p/q in (0, 1) with 2 <= q <= max_den.
Rational random_alpha(std::mt19937_64& rng, std::int64_t max_den);

}  // namespace taublab::verify
