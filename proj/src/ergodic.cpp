#include "taublab/ergodic.hpp"

#include "taublab/errors.hpp"
#include "taublab/lattice_maximal.hpp"
#include "taublab/parallel.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace taublab::ergodic {

namespace {

ValidationReport fail(std::string code, std::string message, std::vector<std::size_t> atoms = {}) {
    return ValidationReport{false, std::move(code), std::move(message), std::move(atoms)};
}

std::string atom_list(const std::vector<std::size_t>& atoms) {
    std::ostringstream os;
    for (std::size_t i = 0; i < atoms.size(); ++i) os << (i ? "," : "") << atoms[i];
    return os.str();
}

Permutation inverse_of(const Permutation& p) {
    Permutation inv(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) inv[p[i]] = i;
    return inv;
}

void require_atom(const AtomicSystem& system, std::size_t atom) {
    if (atom >= system.atom_count()) {
        throw DomainError("atom " + std::to_string(atom) + " is outside a system of " +
                          std::to_string(system.atom_count()) + " atoms");
    }
}

void require_line(const AtomicSystem& system) {
    if (system.dim() != 1) throw DomainError("operation is defined for a single transformation (dim = 1)");
}

std::vector<char> membership(const AtomicSystem& system, const AtomSet& set) {
    std::vector<char> in(system.atom_count(), 0);
    for (std::size_t a : set) {
        require_atom(system, a);
        in[a] = 1;
    }
    return in;
}

void require_nonempty(const AtomSet& set) {
    if (set.empty()) throw DomainError("the set E must contain at least one atom");
}

// ---------------------------------------------------------------------------
// One transformation: cycle decomposition and halos as unions of arcs.

struct Cycles {
    std::vector<std::vector<std::size_t>> cycles;  // atoms in orbit order
    std::vector<std::size_t> cycle_of;
    std::vector<std::size_t> pos;
};

Cycles decompose(const AtomicSystem& system) {
    Cycles c;
    const std::size_t k = system.atom_count();
    c.cycle_of.assign(k, std::numeric_limits<std::size_t>::max());
    c.pos.assign(k, 0);
    for (std::size_t start = 0; start < k; ++start) {
        if (c.cycle_of[start] != std::numeric_limits<std::size_t>::max()) continue;
        std::vector<std::size_t> cyc;
        std::size_t x = start;
        do {
            c.cycle_of[x] = c.cycles.size();
            c.pos[x] = cyc.size();
            cyc.push_back(x);
            x = system.generator(0)[x];
        } while (x != start);
        c.cycles.push_back(std::move(cyc));
    }
    return c;
}

/// Atoms of one cycle covered by some window of length <= 2p - 1 beating
/// alpha. A window's count only changes at hits of E, so the covered set is
/// the union, over cores [u, v] between hits, of the arcs of points m with
/// the core-plus-m span fitting the volume budget.
void cover_cycle(const std::vector<std::size_t>& cyc, const std::vector<char>& in, const Threshold& threshold,
                 bool one_sided, std::vector<char>& covered) {
    const auto p = static_cast<std::int64_t>(cyc.size());
    std::vector<std::int64_t> hits;
    for (std::int64_t i = 0; i < p; ++i) {
        if (in[cyc[static_cast<std::size_t>(i)]]) hits.push_back(i);
    }
    if (hits.empty()) return;
    const std::int64_t max_len = 2 * p - 1;
    const auto h = static_cast<std::int64_t>(hits.size());
    std::vector<std::int64_t> diff(static_cast<std::size_t>(p) + 1, 0);
    bool full = false;
    auto add_arc = [&](std::int64_t s, std::int64_t e) {
        if (e < s) return;
        if (e - s + 1 >= p) {
            full = true;
            return;
        }
        const std::int64_t s0 = ((s % p) + p) % p;
        const std::int64_t e0 = s0 + (e - s);
        if (e0 < p) {
            diff[static_cast<std::size_t>(s0)] += 1;
            diff[static_cast<std::size_t>(e0 + 1)] -= 1;
        } else {
            diff[static_cast<std::size_t>(s0)] += 1;
            diff[static_cast<std::size_t>(p)] -= 1;
            diff[0] += 1;
            diff[static_cast<std::size_t>(e0 - p + 1)] -= 1;
        }
    };
    for (std::int64_t i = 0; i < h && !full; ++i) {
        const std::int64_t u = hits[static_cast<std::size_t>(i)];
        for (std::int64_t c = 1;; ++c) {
            const std::int64_t j = i + c - 1;
            const std::int64_t v = hits[static_cast<std::size_t>(j % h)] + (j / h) * p;
            if (v - u + 1 > max_len) break;
            const std::int64_t budget = std::min(max_len, threshold.max_volume(c));
            if (v - u + 1 > budget) continue;
            if (one_sided) {
                add_arc(v - budget + 1, u);
            } else {
                add_arc(v - budget + 1, u + budget - 1);
            }
            if (full) break;
        }
    }
    if (full) {
        for (std::size_t a : cyc) covered[a] = 1;
        return;
    }
    std::int64_t run = 0;
    for (std::int64_t i = 0; i < p; ++i) {
        run += diff[static_cast<std::size_t>(i)];
        if (run > 0) covered[cyc[static_cast<std::size_t>(i)]] = 1;
    }
}

std::vector<char> line_halo(const Cycles& cycles, const std::vector<char>& in, const Threshold& threshold,
                            bool one_sided) {
    std::vector<char> covered(in.size(), 0);
    for (const auto& cyc : cycles.cycles) cover_cycle(cyc, in, threshold, one_sided, covered);
    return covered;
}

/// Offsets j in [-(L-1), L-1] with U^j(atom) in E, sorted, for one transformation.
std::vector<std::int64_t> line_hits(const AtomicSystem& system, const std::vector<char>& in, std::size_t atom,
                                    std::int64_t L) {
    std::vector<std::int64_t> hits;
    std::size_t x = system.step(0, atom, -(L - 1));
    for (std::int64_t j = -(L - 1); j <= L - 1; ++j) {
        if (in[x]) hits.push_back(j);
        x = system.generator(0)[x];
    }
    return hits;
}

// ---------------------------------------------------------------------------
// Several transformations: dense window tables around each atom.

struct AtomTable {
    std::vector<std::int64_t> side;   // maximal window side per axis
    std::vector<std::size_t> extent;  // 2 * side - 1 per axis
    std::vector<std::size_t> atoms;   // row-major over the offset grid
};

class DenseEvaluator {
public:
    DenseEvaluator(const AtomicSystem& system, WindowBound bound) : system_(system), n_(system.dim()) {
        tables_.reserve(system.atom_count());
        for (std::size_t x = 0; x < system.atom_count(); ++x) tables_.push_back(build(x, bound));
    }

    /// Best (count, volume) over windows around atom.
    std::pair<std::int64_t, std::int64_t> best(const std::vector<char>& in, std::size_t atom) {
        std::pair<std::int64_t, std::int64_t> best{0, 1};
        scan(in, atom, [&](std::int64_t c, std::int64_t v) {
            if (compare_fractions(c, v, best.first, best.second) > 0) best = {c, v};
            return true;
        });
        return best;
    }

    bool exceeds(const std::vector<char>& in, std::size_t atom, const Threshold& t) {
        bool found = false;
        scan(in, atom, [&](std::int64_t c, std::int64_t v) {
            found = t.exceeded_by(c, v);
            return !found;
        });
        return found;
    }

private:
    AtomTable build(std::size_t atom, WindowBound bound) const {
        AtomTable t;
        t.side.resize(n_);
        t.extent.resize(n_);
        std::size_t total = 1;
        for (std::size_t a = 0; a < n_; ++a) {
            t.side[a] = bound.max_side ? static_cast<std::int64_t>(*bound.max_side)
                                       : 2 * static_cast<std::int64_t>(system_.period(a, atom)) - 1;
            t.extent[a] = static_cast<std::size_t>(2 * t.side[a] - 1);
            total *= t.extent[a];
        }
        std::vector<std::size_t> stride(n_);
        std::size_t s = 1;
        for (std::size_t a = n_; a-- > 0;) {
            stride[a] = s;
            s *= t.extent[a];
        }
        t.atoms.resize(total);
        std::size_t origin = atom;
        for (std::size_t a = 0; a < n_; ++a) origin = system_.step(a, origin, -(t.side[a] - 1));
        t.atoms[0] = origin;
        for (std::size_t f = 1; f < total; ++f) {
            std::size_t axis = n_ - 1;
            while ((f / stride[axis]) % t.extent[axis] == 0) --axis;
            t.atoms[f] = system_.generator(axis)[t.atoms[f - stride[axis]]];
        }
        return t;
    }

    template <typename Visit>
    void scan(const std::vector<char>& in, std::size_t atom, Visit&& visit) {
        const AtomTable& t = tables_[atom];
        // prefix sums over an (extent + 1)^n grid
        std::vector<std::size_t> pstride(n_);
        std::size_t cells = 1;
        for (std::size_t a = n_; a-- > 0;) {
            pstride[a] = cells;
            cells *= t.extent[a] + 1;
        }
        prefix_.assign(cells, 0);
        std::vector<std::size_t> coord(n_, 0);
        for (std::size_t f = 0; f < t.atoms.size(); ++f) {
            std::size_t off = 0;
            std::size_t rem = f;
            for (std::size_t a = n_; a-- > 0;) {
                coord[a] = rem % t.extent[a];
                rem /= t.extent[a];
                off += (coord[a] + 1) * pstride[a];
            }
            prefix_[off] = in[t.atoms[f]] ? 1 : 0;
        }
        for (std::size_t a = 0; a < n_; ++a) {
            for (std::size_t off = 0; off < cells; ++off) {
                if ((off / pstride[a]) % (t.extent[a] + 1) > 0) prefix_[off] += prefix_[off - pstride[a]];
            }
        }
        // windows per axis: lo in [0, side-1], hi in [side-1, extent-1], length <= side
        std::vector<std::vector<std::pair<std::size_t, std::size_t>>> spans(n_);
        for (std::size_t a = 0; a < n_; ++a) {
            const auto centre = static_cast<std::size_t>(t.side[a] - 1);
            for (std::size_t lo = 0; lo <= centre; ++lo) {
                for (std::size_t hi = centre; hi < t.extent[a] && hi - lo + 1 <= static_cast<std::size_t>(t.side[a]);
                     ++hi) {
                    spans[a].emplace_back(lo, hi);
                }
            }
        }
        std::vector<std::size_t> sel(n_, 0);
        const std::size_t corners = std::size_t{1} << n_;
        while (true) {
            std::int64_t vol = 1;
            for (std::size_t a = 0; a < n_; ++a) {
                vol *= static_cast<std::int64_t>(spans[a][sel[a]].second - spans[a][sel[a]].first + 1);
            }
            std::int64_t count = 0;
            for (std::size_t mask = 0; mask < corners; ++mask) {
                std::size_t off = 0;
                int lower = 0;
                for (std::size_t a = 0; a < n_; ++a) {
                    if (mask >> a & 1U) {
                        off += spans[a][sel[a]].first * pstride[a];
                        ++lower;
                    } else {
                        off += (spans[a][sel[a]].second + 1) * pstride[a];
                    }
                }
                count += (lower % 2 == 0) ? prefix_[off] : -prefix_[off];
            }
            if (!visit(count, vol)) return;
            std::size_t a = n_;
            while (true) {
                if (a == 0) return;
                --a;
                if (++sel[a] < spans[a].size()) break;
                sel[a] = 0;
            }
        }
    }

    const AtomicSystem& system_;
    std::size_t n_;
    std::vector<AtomTable> tables_;
    std::vector<std::int64_t> prefix_;
};

/// Halo indicator of E for either operator, via the cheapest exact route.
class HaloEngine {
public:
    HaloEngine(const AtomicSystem& system, bool one_sided) : system_(system), one_sided_(one_sided) {
        if (one_sided) require_line(system);
        if (system.dim() == 1) {
            cycles_ = decompose(system);
        } else {
            dense_.emplace(system, WindowBound{});
        }
    }

    std::vector<char> halo(const std::vector<char>& in, const Threshold& t) {
        if (dense_) {
            std::vector<char> out(in.size(), 0);
            for (std::size_t x = 0; x < in.size(); ++x) out[x] = in[x] || dense_->exceeds(in, x, t);
            return out;
        }
        return line_halo(cycles_, in, t, one_sided_);
    }

    BigInt halo_weight(const std::vector<char>& in, const Threshold& t) {
        const auto h = halo(in, t);
        BigInt w = 0;
        for (std::size_t x = 0; x < h.size(); ++x) {
            if (h[x]) w += system_.weights()[x];
        }
        return w;
    }

private:
    const AtomicSystem& system_;
    bool one_sided_;
    Cycles cycles_;
    std::optional<DenseEvaluator> dense_;
};

BigInt set_weight(const AtomicSystem& system, const std::vector<char>& in) {
    BigInt w = 0;
    for (std::size_t x = 0; x < in.size(); ++x) {
        if (in[x]) w += system.weights()[x];
    }
    return w;
}

AtomSet atoms_of(const std::vector<char>& in) {
    AtomSet s;
    for (std::size_t x = 0; x < in.size(); ++x) {
        if (in[x]) s.push_back(x);
    }
    return s;
}

struct Candidate {
    BigInt halo_w = 0;
    BigInt set_w = 1;
    AtomSet atoms;
    bool valid = false;

    /// Higher ratio wins; ties go to the lexicographically least atom list.
    bool beats(const Candidate& o) const {
        if (!o.valid) return valid;
        if (!valid) return false;
        const BigInt lhs = halo_w * o.set_w;
        const BigInt rhs = o.halo_w * set_w;
        if (lhs != rhs) return lhs > rhs;
        return atoms < o.atoms;
    }
};

TauberianEstimate to_estimate(const AtomicSystem& system, const Rational& alpha, const Candidate& best,
                              std::string strategy, EstimateMode mode) {
    const BigInt& d = system.weight_denominator();
    return TauberianEstimate{alpha,
                             Rational(best.halo_w, best.set_w),
                             best.atoms,
                             Rational(best.set_w, d),
                             Rational(best.halo_w, d),
                             std::move(strategy),
                             mode};
}

TauberianEstimate exhaustive_tauberian(const AtomicSystem& system, const Rational& alpha, bool one_sided) {
    const std::size_t k = system.atom_count();
    const Threshold threshold(alpha);
    const std::uint64_t subsets = (std::uint64_t{1} << k) - 1;
    std::vector<Candidate> best(worker_count());
    parallel_chunks(static_cast<std::size_t>(subsets), [&](std::size_t begin, std::size_t end, std::size_t w) {
        HaloEngine engine(system, one_sided);
        std::vector<char> in(k, 0);
        Candidate local;
        for (std::size_t i = begin; i < end; ++i) {
            const std::uint64_t mask = i + 1;
            for (std::size_t x = 0; x < k; ++x) in[x] = (mask >> x & 1U) ? 1 : 0;
            Candidate c;
            c.valid = true;
            c.set_w = set_weight(system, in);
            c.halo_w = engine.halo_weight(in, threshold);
            if (local.valid) {
                const BigInt lhs = c.halo_w * local.set_w;
                const BigInt rhs = local.halo_w * c.set_w;
                if (lhs < rhs) continue;
                c.atoms = atoms_of(in);
                if (lhs == rhs && !(c.atoms < local.atoms)) continue;
            } else {
                c.atoms = atoms_of(in);
            }
            local = std::move(c);
        }
        best[w] = std::move(local);
    });
    Candidate winner;
    for (auto& c : best) {
        if (c.beats(winner)) winner = std::move(c);
    }
    return to_estimate(system, alpha, winner, one_sided ? "exhaustive-one-sided" : "exhaustive", EstimateMode::exact);
}

/// Lower bound for large systems: hill climbing on single-atom toggles from
/// singletons and from arcs of the first generator's orbit through atom 0.
TauberianEstimate heuristic_tauberian(const AtomicSystem& system, const Rational& alpha, bool one_sided,
                                      std::size_t budget) {
    const std::size_t k = system.atom_count();
    const Threshold threshold(alpha);
    HaloEngine engine(system, one_sided);
    std::size_t spent = 0;
    auto evaluate = [&](const std::vector<char>& in) {
        ++spent;
        Candidate c;
        c.valid = true;
        c.set_w = set_weight(system, in);
        c.halo_w = engine.halo_weight(in, threshold);
        c.atoms = atoms_of(in);
        return c;
    };

    std::vector<std::vector<char>> seeds;
    {
        std::vector<char> in(k, 0);
        in[0] = 1;
        seeds.push_back(in);
        std::size_t x = 0;
        for (std::size_t len = 2; len <= system.period(0, 0); ++len) {
            x = system.generator(0)[x];
            in[x] = 1;
            seeds.push_back(in);
        }
    }
    Candidate best;
    for (const auto& s : seeds) {
        if (spent >= budget && best.valid) break;
        Candidate c = evaluate(s);
        if (c.beats(best)) best = std::move(c);
    }
    std::vector<char> cur(k, 0);
    for (std::size_t a : best.atoms) cur[a] = 1;
    bool improved = true;
    while (improved && spent < budget) {
        improved = false;
        for (std::size_t x = 0; x < k && spent < budget; ++x) {
            cur[x] ^= 1;
            if (std::find(cur.begin(), cur.end(), 1) != cur.end()) {
                Candidate c = evaluate(cur);
                if (c.beats(best) && c.halo_w * best.set_w > best.halo_w * c.set_w) {
                    best = std::move(c);
                    improved = true;
                    continue;
                }
            }
            cur[x] ^= 1;
        }
    }
    return to_estimate(system, alpha, best, one_sided ? "hill-climb-one-sided" : "hill-climb",
                       EstimateMode::heuristic);
}

}  // namespace

// ---------------------------------------------------------------------------

ValidationReport validate_system(const SystemSpec& spec) {
    const std::size_t k = spec.masses.size();
    if (k == 0) return fail("no atoms", "system has no atoms");
    Rational total(0);
    for (std::size_t a = 0; a < k; ++a) {
        if (spec.masses[a] <= Rational(0)) {
            return fail("nonpositive mass", "atom " + std::to_string(a) + " has mass " + spec.masses[a].str(), {a});
        }
        total += spec.masses[a];
    }
    if (total != Rational(1)) return fail("masses do not sum to 1", "total mass is " + total.str());
    if (spec.dim == 0) return fail("dimension", "dimension must be at least 1");
    if (spec.generators.size() != spec.dim) {
        return fail("dimension", "expected " + std::to_string(spec.dim) + " generators, got " +
                                     std::to_string(spec.generators.size()));
    }
    for (std::size_t g = 0; g < spec.dim; ++g) {
        const auto& p = spec.generators[g];
        if (p.size() != k) {
            return fail("not a bijection", "generator " + std::to_string(g) + " has length " +
                                               std::to_string(p.size()) + ", expected " + std::to_string(k));
        }
        std::vector<std::size_t> seen(k, k);
        for (std::size_t a = 0; a < k; ++a) {
            if (p[a] >= k) {
                return fail("not a bijection",
                            "generator " + std::to_string(g) + " maps atom " + std::to_string(a) + " out of range", {a});
            }
            if (seen[p[a]] != k) {
                return fail("not a bijection",
                            "generator " + std::to_string(g) + " maps atoms " + std::to_string(seen[p[a]]) + " and " +
                                std::to_string(a) + " to the same atom",
                            {seen[p[a]], a});
            }
            seen[p[a]] = a;
        }
        for (std::size_t a = 0; a < k; ++a) {
            if (spec.masses[p[a]] != spec.masses[a]) {
                return fail("mass not preserved", "generator " + std::to_string(g) + " maps atom " +
                                                      std::to_string(a) + " (mass " + spec.masses[a].str() +
                                                      ") to atom " + std::to_string(p[a]) + " (mass " +
                                                      spec.masses[p[a]].str() + ")",
                            {a, p[a]});
            }
        }
    }
    for (std::size_t g = 0; g < spec.dim; ++g) {
        for (std::size_t h = g + 1; h < spec.dim; ++h) {
            const auto& p = spec.generators[g];
            const auto& q = spec.generators[h];
            for (std::size_t a = 0; a < k; ++a) {
                if (p[q[a]] != q[p[a]]) {
                    return fail("generators do not commute", "generators " + std::to_string(g) + " and " +
                                                                 std::to_string(h) + " disagree at atom " +
                                                                 std::to_string(a),
                                {a});
                }
            }
        }
    }
    return {};
}

AtomicSystem::AtomicSystem(SystemSpec spec) {
    const ValidationReport report = validate_system(spec);
    if (!report.ok) {
        throw DomainError("invalid system (" + report.code + "): " + report.message +
                          (report.atoms.empty() ? "" : " [atoms " + atom_list(report.atoms) + "]"));
    }
    masses_ = std::move(spec.masses);
    generators_ = std::move(spec.generators);
    for (const auto& g : generators_) inverses_.push_back(inverse_of(g));
    BigInt den = 1;
    for (const auto& m : masses_) den = boost::multiprecision::lcm(den, m.denominator());
    weight_den_ = den;
    for (const auto& m : masses_) weights_.push_back(m.numerator() * (den / m.denominator()));
}

std::size_t AtomicSystem::step(std::size_t axis, std::size_t atom, std::int64_t power) const {
    const auto p = static_cast<std::int64_t>(period(axis, atom));
    std::int64_t r = power % p;
    const auto& g = r >= 0 ? generators_[axis] : inverses_[axis];
    r = r >= 0 ? r : -r;
    for (std::int64_t i = 0; i < r; ++i) atom = g[atom];
    return atom;
}

std::size_t AtomicSystem::act(std::span<const std::int64_t> offset, std::size_t atom) const {
    if (offset.size() != dim()) throw DomainError("offset dimension does not match the system");
    for (std::size_t a = 0; a < offset.size(); ++a) atom = step(a, atom, offset[a]);
    return atom;
}

std::size_t AtomicSystem::period(std::size_t axis, std::size_t atom) const {
    std::size_t p = 1;
    for (std::size_t x = generators_[axis][atom]; x != atom; x = generators_[axis][x]) ++p;
    return p;
}

AtomicSystem make_cyclic(std::size_t n) { return make_torus({n}); }

AtomicSystem make_torus(const std::vector<std::size_t>& sizes) {
    if (sizes.empty()) throw DomainError("torus needs at least one axis");
    std::size_t total = 1;
    for (std::size_t s : sizes) {
        if (s == 0) throw DomainError("torus sizes must be positive");
        total *= s;
    }
    const std::size_t n = sizes.size();
    std::vector<std::size_t> stride(n);
    std::size_t st = 1;
    for (std::size_t a = n; a-- > 0;) {
        stride[a] = st;
        st *= sizes[a];
    }
    SystemSpec spec;
    spec.dim = n;
    spec.masses.assign(total, Rational(1, static_cast<std::int64_t>(total)));
    for (std::size_t a = 0; a < n; ++a) {
        Permutation g(total);
        for (std::size_t x = 0; x < total; ++x) {
            const std::size_t c = (x / stride[a]) % sizes[a];
            g[x] = x - c * stride[a] + ((c + 1) % sizes[a]) * stride[a];
        }
        spec.generators.push_back(std::move(g));
    }
    AtomicSystem system(std::move(spec));
    system.shape_ = sizes;
    return system;
}

AtomSet make_atom_set(const AtomicSystem& system, std::vector<std::size_t> atoms) {
    for (std::size_t a : atoms) require_atom(system, a);
    std::sort(atoms.begin(), atoms.end());
    atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
    return atoms;
}

Rational measure(const AtomicSystem& system, const AtomSet& set) {
    Rational m(0);
    for (std::size_t a : set) {
        require_atom(system, a);
        m += system.mass(a);
    }
    return m;
}

AtomSet apply_generator(const AtomicSystem& system, std::size_t axis, const AtomSet& set) {
    if (axis >= system.dim()) throw DomainError("generator index out of range");
    std::vector<std::size_t> out;
    for (std::size_t a : set) {
        require_atom(system, a);
        out.push_back(system.generator(axis)[a]);
    }
    return make_atom_set(system, std::move(out));
}

Rational eval_ergodic_max(const AtomicSystem& system, const AtomSet& E, std::size_t atom, WindowBound bound) {
    require_nonempty(E);
    require_atom(system, atom);
    const auto in = membership(system, E);
    if (bound.max_side && *bound.max_side == 0) throw DomainError("window side bound must be positive");
    if (system.dim() > 1) {
        DenseEvaluator eval(system, bound);
        const auto [c, v] = eval.best(in, atom);
        return Rational(c, v);
    }
    const std::int64_t L = bound.max_side ? static_cast<std::int64_t>(*bound.max_side)
                                          : 2 * static_cast<std::int64_t>(system.period(0, atom)) - 1;
    // Faces at 0 or at hits of E; counts by position in the sorted hit list.
    const auto hits = line_hits(system, in, atom, L);
    std::vector<std::int64_t> los{0}, his{0};
    for (std::int64_t j : hits) {
        if (j < 0) los.push_back(j);
        if (j > 0) his.push_back(j);
    }
    std::int64_t best_c = 0, best_v = 1;
    for (std::int64_t lo : los) {
        for (std::int64_t hi : his) {
            if (hi - lo + 1 > L) continue;
            const auto c = static_cast<std::int64_t>(std::upper_bound(hits.begin(), hits.end(), hi) -
                                                     std::lower_bound(hits.begin(), hits.end(), lo));
            if (compare_fractions(c, hi - lo + 1, best_c, best_v) > 0) {
                best_c = c;
                best_v = hi - lo + 1;
            }
        }
    }
    return Rational(best_c, best_v);
}

AtomSet ergodic_halo(const AtomicSystem& system, const AtomSet& E, const Rational& alpha) {
    require_unit_open(alpha);
    require_nonempty(E);
    const auto in = membership(system, E);
    HaloEngine engine(system, false);
    return atoms_of(engine.halo(in, Threshold(alpha)));
}

Rational ergodic_halo_measure(const AtomicSystem& system, const AtomSet& E, const Rational& alpha) {
    return measure(system, ergodic_halo(system, E, alpha));
}

Rational one_sided_ergodic_max(const AtomicSystem& system, const AtomSet& E, std::size_t atom) {
    require_line(system);
    require_nonempty(E);
    require_atom(system, atom);
    const auto in = membership(system, E);
    const std::size_t L = 2 * system.period(0, atom) - 1;
    std::int64_t c = 0, best_c = 0, best_v = 1;
    std::size_t x = atom;
    for (std::size_t len = 1; len <= L; ++len) {
        c += in[x] ? 1 : 0;
        if (compare_fractions(c, static_cast<std::int64_t>(len), best_c, best_v) > 0) {
            best_c = c;
            best_v = static_cast<std::int64_t>(len);
        }
        x = system.generator(0)[x];
    }
    return Rational(best_c, best_v);
}

Rational one_sided_halo_measure(const AtomicSystem& system, const AtomSet& E, const Rational& alpha) {
    require_unit_open(alpha);
    require_nonempty(E);
    const auto in = membership(system, E);
    HaloEngine engine(system, true);
    return measure(system, atoms_of(engine.halo(in, Threshold(alpha))));
}

TauberianEstimate exact_tauberian(const AtomicSystem& system, const Rational& alpha, TauberianOptions opts) {
    require_unit_open(alpha);
    if (system.atom_count() <= opts.max_enum && system.atom_count() < 63) {
        return exhaustive_tauberian(system, alpha, false);
    }
    return heuristic_tauberian(system, alpha, false, opts.heuristic_budget);
}

TauberianEstimate one_sided_exact_tauberian(const AtomicSystem& system, const Rational& alpha,
                                            TauberianOptions opts) {
    require_unit_open(alpha);
    require_line(system);
    if (system.atom_count() <= opts.max_enum && system.atom_count() < 63) {
        return exhaustive_tauberian(system, alpha, true);
    }
    return heuristic_tauberian(system, alpha, true, opts.heuristic_budget);
}

bool tower_is_disjoint(const AtomicSystem& system, const TowerBase& tower) {
    if (tower.heights.size() != system.dim()) throw DomainError("tower heights must match the system dimension");
    std::vector<char> seen(system.atom_count(), 0);
    std::vector<std::int64_t> j(system.dim(), 0);
    for (std::size_t h : tower.heights) {
        if (h == 0) throw DomainError("tower heights must be positive");
    }
    while (true) {
        for (std::size_t b : tower.base) {
            const std::size_t x = system.act(j, b);
            if (seen[x]) return false;
            seen[x] = 1;
        }
        std::size_t a = system.dim();
        while (true) {
            if (a == 0) return true;
            --a;
            if (++j[a] < static_cast<std::int64_t>(tower.heights[a])) break;
            j[a] = 0;
        }
    }
}

IndexResult index(const AtomicSystem& system) {
    require_line(system);
    const Cycles c = decompose(system);
    std::size_t best = 0;
    for (std::size_t i = 1; i < c.cycles.size(); ++i) {
        if (c.cycles[i].size() > c.cycles[best].size()) best = i;
    }
    const std::size_t len = c.cycles[best].size();
    IndexResult r{len, TowerBase{AtomSet{c.cycles[best].front()}, {len}}};
    if (!tower_is_disjoint(system, r.certificate)) throw std::logic_error("index certificate is not a tower");
    return r;
}

TowerBase rokhlin_tower(const AtomicSystem& system, const std::vector<std::size_t>& heights) {
    if (heights.size() != system.dim()) throw DomainError("tower heights must match the system dimension");
    if (const auto& shape = system.torus_shape()) {
        for (std::size_t a = 0; a < heights.size(); ++a) {
            if (heights[a] > (*shape)[a]) {
                throw DomainError("tower height " + std::to_string(heights[a]) + " exceeds torus size " +
                                  std::to_string((*shape)[a]) + " on axis " + std::to_string(a));
            }
        }
    }
    for (std::size_t x = 0; x < system.atom_count(); ++x) {
        TowerBase t{AtomSet{x}, heights};
        if (tower_is_disjoint(system, t)) return t;
    }
    throw DomainError("no single-atom base admits a tower of the requested heights");
}

bool JumpProfile::all_hold() const {
    return std::all_of(rows.begin(), rows.end(), [](const JumpRow& r) { return r.holds; });
}

JumpProfile jump_profile(std::size_t n, const std::vector<Rational>& alphas, TauberianOptions opts) {
    if (n < 2) throw DomainError("jump profile needs N >= 2");
    if (n > opts.max_enum) {
        throw DomainError("N = " + std::to_string(n) + " exceeds the exhaustive threshold " +
                          std::to_string(opts.max_enum));
    }
    const auto N = static_cast<std::int64_t>(n);
    JumpProfile prof;
    prof.n = n;
    prof.jump_at = Rational(2 * N - 2, 2 * N - 1);
    prof.lower_bound = Rational(N, N - 1);
    const AtomicSystem system = make_cyclic(n);
    AtomSet tower;
    for (std::size_t i = 1; i < n; ++i) tower.push_back(i);
    for (const auto& alpha : alphas) {
        require_unit_open(alpha);
        JumpRow row{alpha, exact_tauberian(system, alpha, opts),
                    ergodic_halo_measure(system, tower, alpha) / measure(system, tower)};
        if (alpha < prof.jump_at) {
            row.side = JumpRow::Side::below;
            row.holds = row.constant.value >= prof.lower_bound && row.tower_witness_ratio >= prof.lower_bound;
        } else if (alpha > prof.jump_at) {
            row.side = JumpRow::Side::above;
            row.holds = row.constant.value == Rational(1);
        } else {
            row.side = JumpRow::Side::at;
            row.holds = true;
        }
        prof.rows.push_back(std::move(row));
    }
    return prof;
}

TransferResult transfer_witness(const AtomicSystem& system, const LatticeSet& discrete_set, const Rational& alpha) {
    require_unit_open(alpha);
    if (discrete_set.empty()) throw DomainError("the lattice set must be nonempty");
    if (discrete_set.dim() != system.dim()) throw DomainError("lattice set and system dimensions differ");
    const std::size_t n = system.dim();
    const lattice::HaloSet discrete = lattice::halo(discrete_set, alpha);
    std::int64_t radius = 0;
    for (std::size_t i = 0; i < discrete.members.size(); ++i) {
        for (Coord c : discrete.members.point(i)) radius = std::max(radius, c < 0 ? -c : c);
    }
    // A base atom whose translates over [-N, N]^n are pairwise distinct.
    std::optional<std::size_t> base;
    const std::vector<std::size_t> side(n, static_cast<std::size_t>(2 * radius + 1));
    for (std::size_t x = 0; x < system.atom_count() && !base; ++x) {
        bool fits = true;
        for (std::size_t a = 0; a < n && fits; ++a) fits = system.period(a, x) >= side[a];
        if (!fits) continue;
        std::vector<std::int64_t> shift(n, -radius);
        const std::size_t corner = system.act(shift, x);
        if (tower_is_disjoint(system, TowerBase{AtomSet{corner}, side})) base = x;
    }
    if (!base) {
        throw DomainError("insufficient tower room: need translates of one atom over [-" + std::to_string(radius) +
                          ", " + std::to_string(radius) + "]^" + std::to_string(n) +
                          ", i.e. orbit boxes of side at least " + std::to_string(2 * radius + 1));
    }
    TransferResult r;
    r.base_atom = *base;
    r.radius = radius;
    std::vector<std::size_t> atoms;
    for (std::size_t i = 0; i < discrete_set.size(); ++i) {
        auto p = discrete_set.point(i);
        atoms.push_back(system.act(std::vector<std::int64_t>(p.begin(), p.end()), *base));
    }
    r.set = make_atom_set(system, atoms);
    atoms.clear();
    for (std::size_t i = 0; i < discrete.members.size(); ++i) {
        auto p = discrete.members.point(i);
        atoms.push_back(system.act(std::vector<std::int64_t>(p.begin(), p.end()), *base));
    }
    r.halo_image = make_atom_set(system, atoms);
    const AtomSet ergodic = ergodic_halo(system, r.set, alpha);
    r.ergodic_ratio = measure(system, ergodic) / measure(system, r.set);
    r.discrete_ratio = Rational(static_cast<std::int64_t>(discrete.members.size()),
                                static_cast<std::int64_t>(discrete_set.size()));
    if (!std::includes(ergodic.begin(), ergodic.end(), r.halo_image.begin(), r.halo_image.end()) ||
        r.ergodic_ratio < r.discrete_ratio) {
        throw std::logic_error("transferred halo does not contain the image of the discrete halo");
    }
    if (n == 1) {
        // Windows meeting two periodic copies of the set: best density is
        // attained spanning exactly one period boundary, or approached as
        // k / M when spanning many.
        const Threshold t(alpha);
        const auto M = static_cast<std::int64_t>(system.period(0, *base));
        const auto k = static_cast<std::int64_t>(discrete_set.size());
        bool wrap = t.exceeded_by(k, M);
        for (std::int64_t a = 0; a < k && !wrap; ++a) {
            for (std::int64_t b = 0; b < k && !wrap; ++b) {
                const Coord xa = discrete_set.point(static_cast<std::size_t>(a))[0];
                const Coord xb = discrete_set.point(static_cast<std::size_t>(b))[0];
                wrap = t.exceeded_by((k - a) + (b + 1), xb + M - xa + 1);
            }
        }
        r.wraparound = wrap;
    }
    return r;
}

}  // namespace taublab::ergodic
