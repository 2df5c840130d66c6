#pragma once

/**
 * @file lattice_maximal.hpp
 * @brief Discrete strong and one-sided maximal operators on Z^n applied to
 * indicator functions, their halos and halo ratios.
 *
 * The strong maximal value of chi_E at m is the largest density
 * #(E ∩ B) / #B over integer boxes B containing m. Every open axis-parallel
 * rectangle containing the origin traces such a box on the lattice, so
 * boxes are enumerated directly. All comparisons are exact.
 */

#include "taublab/estimate.hpp"
#include "taublab/lattice.hpp"
#include "taublab/rational.hpp"

#include <cstdint>

namespace taublab::lattice {

struct MaximalValue {
    Rational value;
    IntBox box;  ///< lexicographically smallest (lo, hi) box attaining value
};

/// Strong maximal value of chi_E at m together with a maximizing box.
MaximalValue eval_strong_max_witness(const LatticeSet& E, const LatticePoint& m);
Rational eval_strong_max(const LatticeSet& E, const LatticePoint& m);

/// eval_strong_max(E, m) > alpha; returns on the first box that beats alpha.
bool exceeds(const LatticeSet& E, const LatticePoint& m, const Rational& alpha);

struct HaloSet {
    Rational alpha;
    LatticeSet members;
    LatticeSet source;
};

/// bbox(E) dilated by ceil(#E / alpha) on every side; always contains the halo.
IntBox halo_search_region(const LatticeSet& E, const Rational& alpha);

/// {m : M chi_E(m) > alpha}.
HaloSet halo(const LatticeSet& E, const Rational& alpha);
/// #halo(E, alpha).members without materializing the points.
std::int64_t halo_size(const LatticeSet& E, const Rational& alpha);
Rational halo_ratio(const LatticeSet& E, const Rational& alpha);

// One-sided (forward window) operator on Z. E must be one-dimensional.

/// max over N >= 1 of #(E ∩ [m, m + N - 1]) / N; zero when m > max E.
Rational one_sided_max(const LatticeSet& E, const LatticePoint& m);
LatticeSet one_sided_halo(const LatticeSet& E, const Rational& alpha);
std::int64_t one_sided_halo_size(const LatticeSet& E, const Rational& alpha);
Rational one_sided_halo_ratio(const LatticeSet& E, const Rational& alpha);

/// E = {0, ..., k - 1} with its exact strong halo ratio.
TauberianEstimate interval_witness(std::int64_t k, const Rational& alpha);

/// E1 x E2 for one-dimensional E1, E2.
LatticeSet product_witness(const LatticeSet& E1, const LatticeSet& E2);

}  // namespace taublab::lattice
