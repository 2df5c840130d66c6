#pragma once

#include "taublab/lattice.hpp"
#include "taublab/rational.hpp"

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

namespace taublab {

/// Sorted atom indices of a finite measure space.
using AtomSet = std::vector<std::size_t>;

using Witness = std::variant<LatticeSet, AtomSet>;

enum class EstimateMode { exact, heuristic };

std::string to_string(EstimateMode mode);

/// An achieved halo ratio: value = halo_measure / witness_measure at alpha.
/// For lattice witnesses the measures are point counts; for atom sets they
/// are probability masses. `value` is always a lower bound for the
/// corresponding Tauberian constant, and exact when mode == exact.
struct TauberianEstimate {
    Rational alpha;
    Rational value;
    Witness witness;
    Rational witness_measure;
    Rational halo_measure;
    std::string strategy;
    EstimateMode mode = EstimateMode::exact;
};

}  // namespace taublab
