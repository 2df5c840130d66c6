#pragma once

/**
 * @file search.hpp
 * @brief Lower bounds for the discrete Tauberian constants: exhaustive
 * search over small windows, structured witness families, seeded annealing,
 * alpha sweeps with a monotone envelope, and exploratory probes of the
 * resulting curves.
 *
 * Every value reported here is an achieved halo ratio of a stored witness,
 * never an extrapolation. `certify` recomputes it independently.
 */

#include "taublab/estimate.hpp"
#include "taublab/lattice.hpp"
#include "taublab/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace taublab::search {

enum class Operator { strong, one_sided };
enum class Strategy { exhaustive, interval_family, product_family, staircase_family, box_family, anneal };
enum class Family { intervals, boxes, products, staircases };

std::string to_string(Operator op);
std::string to_string(Strategy s);
/// Throws ParseError on unknown names.
Operator parse_operator(std::string_view name);
Strategy parse_strategy(std::string_view name);

struct SearchConfig {
    std::size_t dim = 1;
    /// Search window for exhaustive and anneal; defaults to [0, 11]^dim.
    std::optional<IntBox> window;
    Strategy strategy = Strategy::interval_family;
    std::uint64_t seed = 0;
    /// Candidate evaluations allowed to anneal.
    std::size_t budget = 10000;
    /// Family parameter K (largest side length).
    std::int64_t family_max = 20;
    Operator op = Operator::strong;
    /// Extra starting sets for anneal.
    std::vector<LatticeSet> initial;

    IntBox resolved_window() const;
};

/// Largest window cardinality accepted by exhaustive_search.
inline constexpr std::int64_t kMaxExhaustiveWindow = 24;

/// #halo and the exact ratio of E under the chosen operator.
std::pair<std::int64_t, Rational> halo_ratio_of(const LatticeSet& E, const Rational& alpha, Operator op);

/// Builds an estimate for E, recomputing its ratio.
TauberianEstimate estimate_for(const LatticeSet& E, const Rational& alpha, Operator op, std::string strategy,
                               EstimateMode mode);

/// Exact maximum over nonempty subsets of the window touching its lower
/// corner on every axis; lexicographically least witness among maximizers.
TauberianEstimate exhaustive_search(const IntBox& window, const Rational& alpha, Operator op = Operator::strong);

/// Members of a family with parameter K:
///  intervals   {0..k-1}, k <= K (dim 1)
///  boxes       cubes [0, k-1]^dim, k <= K
///  products    [0, a-1] x [0, b-1], 1 <= a <= b <= K (dim 2)
///  staircases  {(i, j) : 0 <= i < k, i <= j < i + t}, 1 <= t <= k <= K (dim 2)
std::vector<LatticeSet> family_members(Family family, std::int64_t K, std::size_t dim = 1);

/// Best member of the family; the first maximizer in enumeration order wins.
TauberianEstimate family_search(Family family, std::int64_t K, const Rational& alpha, Operator op = Operator::strong,
                                std::size_t dim = 1);

/// Seeded local search over single-point toggles inside the window.
TauberianEstimate anneal_search(const SearchConfig& config, const Rational& alpha);

/// Dispatches on config.strategy.
TauberianEstimate run_search(const SearchConfig& config, const Rational& alpha);

struct SweepRow {
    Rational alpha;
    TauberianEstimate estimate;  ///< envelope estimate at this alpha
    std::int64_t halo_size = 0;
};

struct SweepResult {
    SearchConfig config;
    std::vector<SweepRow> rows;
};

/// Best estimate per grid point, then every witness re-evaluated at every
/// grid point; each row keeps the largest ratio, so values are nonincreasing
/// in alpha. The grid must be strictly increasing inside (0, 1).
SweepResult sweep(const std::vector<Rational>& grid, const SearchConfig& config);

/// Recomputes the halo ratio of a lattice witness and compares it with the
/// stored value and measures.
bool certify(const TauberianEstimate& estimate, Operator op = Operator::strong);

struct CurvePoint {
    Rational alpha;
    Rational value;
};

std::vector<CurvePoint> curve_of(const SweepResult& sweep);

/// Largest |L(a) - L(b)| / |a - b|^p over pairs of a lower-bound curve.
/// Exploratory: a finite grid probes, and cannot prove, membership in C^p.
struct ModulusReport {
    Rational exponent;
    std::size_t pairs = 0;
    double max_quotient = 0;
    std::optional<Rational> max_quotient_exact;  ///< when p = 1
    std::pair<Rational, Rational> argmax;
    bool exploratory = true;
    std::string disclaimer;
};

ModulusReport holder_modulus(const std::vector<CurvePoint>& curve, const Rational& p);

/// Least-squares fit of log(L - 1) against log(1/alpha - 1) over points with
/// 9/10 <= alpha < 1 and L > 1.
struct SolyanikReport {
    std::size_t points = 0;
    double slope = 0;
    double intercept = 0;
    std::vector<double> residuals;
    bool exploratory = true;
    std::string disclaimer;
};

SolyanikReport solyanik_probe(const std::vector<CurvePoint>& curve);

}  // namespace taublab::search
