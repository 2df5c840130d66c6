#pragma once

/**
 * @file ergodic.hpp
 * @brief Finite atomic probability spaces with commuting, invertible,
 * mass-preserving Z^n actions, and the ergodic maximal operators on them.
 *
 * Atoms carry rational masses summing to one. The action is given by n
 * permutations U_1, ..., U_n of the atoms; U^j means U_1^{j_1} ... U_n^{j_n}.
 * Every orbit is periodic, which makes each maximal value a finite maximum:
 * along a direction with period p, a window of length >= 2p can drop one
 * full period without lowering the best density, so windows with side at
 * most 2p - 1 suffice.
 */

#include "taublab/estimate.hpp"
#include "taublab/lattice.hpp"
#include "taublab/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace taublab::ergodic {

using Permutation = std::vector<std::size_t>;

/// Raw description of a system, prior to validation.
struct SystemSpec {
    std::vector<Rational> masses;
    std::size_t dim = 1;
    std::vector<Permutation> generators;
};

struct ValidationReport {
    bool ok = true;
    std::string code;     ///< empty when ok
    std::string message;  ///< human-readable, names the witnessing atoms
    std::vector<std::size_t> atoms;
};

/// Checks the invariants in order: atoms exist, masses positive and summing
/// to 1, one generator per dimension, each generator a bijection preserving
/// mass, generators pairwise commuting. Reports the first violation.
ValidationReport validate_system(const SystemSpec& spec);

class AtomicSystem {
public:
    /// Throws DomainError carrying the validation message when invalid.
    explicit AtomicSystem(SystemSpec spec);

    std::size_t atom_count() const { return masses_.size(); }
    std::size_t dim() const { return generators_.size(); }
    const std::vector<Rational>& masses() const { return masses_; }
    const Rational& mass(std::size_t atom) const { return masses_[atom]; }
    const Permutation& generator(std::size_t axis) const { return generators_[axis]; }

    /// U_axis^power(atom), any sign of power.
    std::size_t step(std::size_t axis, std::size_t atom, std::int64_t power) const;
    /// U^offset(atom).
    std::size_t act(std::span<const std::int64_t> offset, std::size_t atom) const;
    /// Smallest p >= 1 with U_axis^p(atom) = atom.
    std::size_t period(std::size_t axis, std::size_t atom) const;

    /// Present for systems built by make_cyclic / make_torus.
    const std::optional<std::vector<std::size_t>>& torus_shape() const { return shape_; }

    /// Masses as integers over a common denominator, for exact sums.
    const std::vector<BigInt>& weights() const { return weights_; }
    const BigInt& weight_denominator() const { return weight_den_; }

private:
    friend AtomicSystem make_torus(const std::vector<std::size_t>& sizes);

    std::vector<Rational> masses_;
    std::vector<Permutation> generators_;
    std::vector<Permutation> inverses_;
    std::optional<std::vector<std::size_t>> shape_;
    std::vector<BigInt> weights_;
    BigInt weight_den_{1};
};

/// Z/N with the shift x -> x + 1 and uniform masses.
AtomicSystem make_cyclic(std::size_t n);
/// Z/N_1 x ... x Z/N_k with coordinate shifts; atom index is row-major
/// (last coordinate fastest).
AtomicSystem make_torus(const std::vector<std::size_t>& sizes);

/// Validated set of atoms; sorted, unique, in range.
AtomSet make_atom_set(const AtomicSystem& system, std::vector<std::size_t> atoms);
Rational measure(const AtomicSystem& system, const AtomSet& set);
/// Image of the set under U_axis.
AtomSet apply_generator(const AtomicSystem& system, std::size_t axis, const AtomSet& set);

/// Window size policy. Default: per axis and atom, side at most 2p - 1 with
/// p the period of that atom; otherwise a fixed maximal side length.
struct WindowBound {
    std::optional<std::size_t> max_side;
};

/// sup over boxes [lo, hi] ∋ 0 of (1 / #B) sum_{j in B} chi_E(U^j atom).
Rational eval_ergodic_max(const AtomicSystem& system, const AtomSet& E, std::size_t atom, WindowBound bound = {});

/// mu({atom : eval_ergodic_max > alpha}).
Rational ergodic_halo_measure(const AtomicSystem& system, const AtomSet& E, const Rational& alpha);
/// Atoms with eval_ergodic_max > alpha.
AtomSet ergodic_halo(const AtomicSystem& system, const AtomSet& E, const Rational& alpha);

/// max over N >= 0 of (1 / (N + 1)) sum_{j=0}^{N} chi_E(T^j atom). dim must be 1.
Rational one_sided_ergodic_max(const AtomicSystem& system, const AtomSet& E, std::size_t atom);
Rational one_sided_halo_measure(const AtomicSystem& system, const AtomSet& E, const Rational& alpha);

struct TauberianOptions {
    /// Largest atom count searched exhaustively (all 2^k - 1 subsets).
    std::size_t max_enum = 20;
    /// Halo evaluations allowed to the heuristic search beyond max_enum.
    std::size_t heuristic_budget = 4000;
};

/// sup over E of mu(halo) / mu(E). Exact (lexicographically least witness)
/// when atom_count <= max_enum, otherwise a lower bound tagged heuristic.
TauberianEstimate exact_tauberian(const AtomicSystem& system, const Rational& alpha, TauberianOptions opts = {});
/// Same for the one-sided operator. dim must be 1.
TauberianEstimate one_sided_exact_tauberian(const AtomicSystem& system, const Rational& alpha,
                                            TauberianOptions opts = {});

struct TowerBase {
    AtomSet base;
    std::vector<std::size_t> heights;
};

/// True when the images U^j(base), 0 <= j_i < heights_i, are pairwise disjoint.
bool tower_is_disjoint(const AtomicSystem& system, const TowerBase& tower);

struct IndexResult {
    std::optional<std::size_t> value;  ///< nullopt encodes an infinite index
    TowerBase certificate;
};

/// Largest N admitting a positive-mass A with A, TA, ..., T^{N-1}A pairwise
/// disjoint. On a finite system this is the longest cycle of T. dim must be 1.
IndexResult index(const AtomicSystem& system);

/// Single-atom base whose translates over the given heights are disjoint.
TowerBase rokhlin_tower(const AtomicSystem& system, const std::vector<std::size_t>& heights);

struct JumpRow {
    Rational alpha;
    TauberianEstimate constant;
    /// Ratio achieved by E = {Ta, ..., T^{N-1}a}.
    Rational tower_witness_ratio;
    enum class Side { below, at, above } side = Side::below;
    bool holds = true;
};

struct JumpProfile {
    std::size_t n = 0;
    Rational jump_at;       ///< (2N - 2) / (2N - 1)
    Rational lower_bound;   ///< N / (N - 1)
    std::vector<JumpRow> rows;
    bool all_hold() const;
};

/// Exact Tauberian constants of the uniform N-cycle over an alpha grid, with
/// each row checked against the jump at (2N - 2) / (2N - 1): at least
/// N / (N - 1) below it (achieved by the tower witness), exactly 1 above.
JumpProfile jump_profile(std::size_t n, const std::vector<Rational>& alphas, TauberianOptions opts = {});

struct TransferResult {
    AtomSet set;              ///< union of U^j(base) over j in the lattice set
    std::size_t base_atom = 0;
    std::int64_t radius = 0;  ///< N with the discrete halo inside [-N, N]^n
    AtomSet halo_image;       ///< U^m(base) over m in the discrete halo
    Rational ergodic_ratio;
    Rational discrete_ratio;
    /// One-dimensional systems only: whether a window meeting two periodic
    /// copies of the lattice set can beat alpha. When false the ratios agree.
    std::optional<bool> wraparound;
};

/// Replays the tower construction: a lattice witness is placed on the
/// translates of a single base atom, and its ergodic halo ratio is compared
/// with the discrete one. Throws DomainError when no atom has injective
/// translates over [-N, N]^n.
TransferResult transfer_witness(const AtomicSystem& system, const LatticeSet& discrete_set, const Rational& alpha);

}  // namespace taublab::ergodic
