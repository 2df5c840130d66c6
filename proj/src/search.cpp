#include "taublab/search.hpp"

#include "taublab/errors.hpp"
#include "taublab/lattice_maximal.hpp"
#include "taublab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace taublab {

std::string to_string(EstimateMode mode) { return mode == EstimateMode::exact ? "exact" : "heuristic"; }

}  // namespace taublab

namespace taublab::search {

namespace {

constexpr const char* kModulusDisclaimer =
    "exploratory: quotients over a finite grid of lower bounds; this probes, and does not prove, Holder regularity";
constexpr const char* kSolyanikDisclaimer =
    "exploratory: regression over a finite grid of lower bounds; no exponent is asserted";

struct Scored {
    LatticeSet set;
    std::int64_t halo = 0;
    Rational ratio;
    bool valid = false;

    /// Strictly better ratio, or equal ratio and lexicographically smaller set.
    bool beats(const Scored& o) const {
        if (!o.valid) return valid;
        if (!valid) return false;
        if (ratio != o.ratio) return ratio > o.ratio;
        return set < o.set;
    }
};

Scored score(LatticeSet set, const Rational& alpha, Operator op) {
    auto [h, r] = halo_ratio_of(set, alpha, op);
    return Scored{std::move(set), h, std::move(r), true};
}

TauberianEstimate to_estimate(const Scored& s, const Rational& alpha, std::string strategy, EstimateMode mode) {
    return TauberianEstimate{alpha,
                             s.ratio,
                             s.set,
                             Rational(static_cast<std::int64_t>(s.set.size())),
                             Rational(s.halo),
                             std::move(strategy),
                             mode};
}

void require_line(Operator op, std::size_t dim) {
    if (op == Operator::one_sided && dim != 1) throw DomainError("the one-sided operator is defined on Z only");
}

LatticeSet rectangle(std::int64_t a, std::int64_t b) {
    return LatticeSet::from_box(IntBox({0, 0}, {a - 1, b - 1}));
}

}  // namespace

std::string to_string(Operator op) { return op == Operator::strong ? "strong" : "one-sided"; }

std::string to_string(Strategy s) {
    switch (s) {
        case Strategy::exhaustive: return "exhaustive";
        case Strategy::interval_family: return "interval-family";
        case Strategy::product_family: return "product-family";
        case Strategy::staircase_family: return "staircase-family";
        case Strategy::box_family: return "box-family";
        case Strategy::anneal: return "anneal";
    }
    return "?";
}

Operator parse_operator(std::string_view name) {
    if (name == "strong") return Operator::strong;
    if (name == "one-sided") return Operator::one_sided;
    throw ParseError("unknown operator '" + std::string(name) + "' (expected strong or one-sided)");
}

Strategy parse_strategy(std::string_view name) {
    for (Strategy s : {Strategy::exhaustive, Strategy::interval_family, Strategy::product_family,
                       Strategy::staircase_family, Strategy::box_family, Strategy::anneal}) {
        if (name == to_string(s)) return s;
    }
    throw ParseError("unknown strategy '" + std::string(name) +
                     "' (expected exhaustive, interval-family, product-family, staircase-family, box-family or anneal)");
}

IntBox SearchConfig::resolved_window() const {
    if (dim == 0) throw DomainError("dimension must be at least 1");
    if (!window) return IntBox(std::vector<Coord>(dim, 0), std::vector<Coord>(dim, 11));
    if (window->dim() != dim) throw DomainError("window dimension does not match --dim");
    return *window;
}

std::pair<std::int64_t, Rational> halo_ratio_of(const LatticeSet& E, const Rational& alpha, Operator op) {
    if (E.empty()) throw DomainError("the set E must be nonempty");
    const std::int64_t h =
        op == Operator::strong ? lattice::halo_size(E, alpha) : lattice::one_sided_halo_size(E, alpha);
    return {h, Rational(h, static_cast<std::int64_t>(E.size()))};
}

TauberianEstimate estimate_for(const LatticeSet& E, const Rational& alpha, Operator op, std::string strategy,
                               EstimateMode mode) {
    return to_estimate(score(E, alpha, op), alpha, std::move(strategy), mode);
}

TauberianEstimate exhaustive_search(const IntBox& window, const Rational& alpha, Operator op) {
    require_unit_open(alpha);
    require_line(op, window.dim());
    const std::int64_t cells = box_lattice_count(window);
    if (cells > kMaxExhaustiveWindow) {
        throw DomainError("exhaustive search refuses a window of " + std::to_string(cells) + " points (limit " +
                          std::to_string(kMaxExhaustiveWindow) + ")");
    }
    const LatticeSet all = LatticeSet::from_box(window);
    const std::size_t n = window.dim();
    const auto k = static_cast<std::size_t>(cells);
    // Translation classes: keep subsets meeting the lower face on every axis.
    std::vector<std::uint32_t> face(n, 0);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t a = 0; a < n; ++a) {
            if (all.point(i)[a] == window.lo[a]) face[a] |= std::uint32_t{1} << i;
        }
    }
    const std::size_t subsets = (std::size_t{1} << k) - 1;
    std::vector<Scored> best(worker_count());
    parallel_chunks(subsets, [&](std::size_t begin, std::size_t end, std::size_t w) {
        Scored local;
        std::vector<LatticePoint> pts;
        for (std::size_t i = begin; i < end; ++i) {
            const auto mask = static_cast<std::uint32_t>(i + 1);
            if (!std::all_of(face.begin(), face.end(), [&](std::uint32_t f) { return (mask & f) != 0; })) continue;
            pts.clear();
            for (std::size_t b = 0; b < k; ++b) {
                if (mask >> b & 1U) pts.push_back(all.point_value(b));
            }
            Scored s = score(LatticeSet(n, pts), alpha, op);
            if (s.beats(local)) local = std::move(s);
        }
        best[w] = std::move(local);
    });
    Scored winner;
    for (auto& s : best) {
        if (s.beats(winner)) winner = std::move(s);
    }
    return to_estimate(winner, alpha, "exhaustive", EstimateMode::exact);
}

std::vector<LatticeSet> family_members(Family family, std::int64_t K, std::size_t dim) {
    if (K < 1) throw DomainError("family parameter K must be at least 1, got " + std::to_string(K));
    std::vector<LatticeSet> out;
    switch (family) {
        case Family::intervals:
            if (dim != 1) throw DomainError("the interval family lives in dimension 1");
            for (std::int64_t k = 1; k <= K; ++k) out.push_back(LatticeSet::interval(0, k));
            break;
        case Family::boxes:
            if (dim == 0) throw DomainError("dimension must be at least 1");
            for (std::int64_t k = 1; k <= K; ++k) {
                out.push_back(LatticeSet::from_box(IntBox(std::vector<Coord>(dim, 0), std::vector<Coord>(dim, k - 1))));
            }
            break;
        case Family::products:
            if (dim != 2) throw DomainError("the product family lives in dimension 2");
            for (std::int64_t a = 1; a <= K; ++a) {
                for (std::int64_t b = a; b <= K; ++b) out.push_back(rectangle(a, b));
            }
            break;
        case Family::staircases:
            if (dim != 2) throw DomainError("the staircase family lives in dimension 2");
            for (std::int64_t k = 1; k <= K; ++k) {
                for (std::int64_t t = 1; t <= k; ++t) {
                    std::vector<LatticePoint> pts;
                    for (std::int64_t i = 0; i < k; ++i) {
                        for (std::int64_t j = i; j < i + t; ++j) pts.push_back({i, j});
                    }
                    out.emplace_back(2, std::move(pts));
                }
            }
            break;
    }
    return out;
}

TauberianEstimate family_search(Family family, std::int64_t K, const Rational& alpha, Operator op, std::size_t dim) {
    require_unit_open(alpha);
    require_line(op, dim);
    const auto members = family_members(family, K, dim);
    if (members.empty()) throw DomainError("empty family");
    std::vector<Scored> scored(members.size());
    parallel_chunks(members.size(), [&](std::size_t begin, std::size_t end, std::size_t) {
        for (std::size_t i = begin; i < end; ++i) scored[i] = score(members[i], alpha, op);
    });
    std::size_t best = 0;
    for (std::size_t i = 1; i < scored.size(); ++i) {
        if (scored[i].ratio > scored[best].ratio) best = i;
    }
    static const char* tags[] = {"interval-family", "box-family", "product-family", "staircase-family"};
    return to_estimate(scored[best], alpha, tags[static_cast<int>(family)], EstimateMode::heuristic);
}

TauberianEstimate anneal_search(const SearchConfig& config, const Rational& alpha) {
    require_unit_open(alpha);
    require_line(config.op, config.dim);
    const IntBox window = config.resolved_window();
    const LatticeSet all = LatticeSet::from_box(window);
    const std::size_t n = window.dim();
    const std::size_t k = all.size();

    auto index_of = [&](std::span<const Coord> p) {
        std::size_t idx = 0;
        for (std::size_t a = 0; a < n; ++a) {
            idx = idx * static_cast<std::size_t>(window.hi[a] - window.lo[a] + 1) +
                  static_cast<std::size_t>(p[a] - window.lo[a]);
        }
        return idx;
    };
    auto to_set = [&](const std::vector<char>& in) {
        std::vector<LatticePoint> pts;
        for (std::size_t i = 0; i < k; ++i) {
            if (in[i]) pts.push_back(all.point_value(i));
        }
        return LatticeSet(n, std::move(pts));
    };

    // Initial population: the supplied sets, plus the corner point and the
    // boxes anchored at the lower corner that fit in the window.
    std::vector<LatticeSet> initial = config.initial;
    for (const auto& s : initial) {
        if (s.dim() != n) throw DomainError("initial set dimension does not match the window");
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (!window.contains(s.point(i))) throw DomainError("initial set leaves the anneal window");
        }
    }
    if (config.initial.empty()) {
        std::vector<Coord> side(n, 1);
        const std::int64_t cap = std::max<std::int64_t>(1, config.family_max);
        while (true) {
            std::vector<Coord> hi(n);
            for (std::size_t a = 0; a < n; ++a) hi[a] = window.lo[a] + side[a] - 1;
            initial.push_back(LatticeSet::from_box(IntBox(window.lo, hi)));
            std::size_t a = n;
            bool done = true;
            while (a-- > 0) {
                if (side[a] < std::min(cap, window.hi[a] - window.lo[a] + 1)) {
                    ++side[a];
                    done = false;
                    break;
                }
                side[a] = 1;
            }
            if (done) break;
        }
    }

    Scored best;
    for (const auto& s : initial) {
        Scored c = score(s, alpha, config.op);
        if (c.beats(best)) best = std::move(c);
    }

    std::vector<char> cur(k, 0);
    for (std::size_t i = 0; i < best.set.size(); ++i) cur[index_of(best.set.point(i))] = 1;
    Rational cur_ratio = best.ratio;
    std::size_t cur_size = best.set.size();

    std::mt19937_64 rng(config.seed);
    constexpr double t_start = 1.0;
    constexpr double t_end = 1e-3;
    for (std::size_t step = 0; step < config.budget; ++step) {
        const double temperature =
            t_start * std::pow(t_end / t_start, static_cast<double>(step) / static_cast<double>(config.budget));
        const std::size_t i = static_cast<std::size_t>(rng() % k);
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        if (cur[i] && cur_size == 1) continue;
        cur[i] ^= 1;
        Scored c = score(to_set(cur), alpha, config.op);
        bool accept = c.ratio >= cur_ratio;
        if (!accept) {
            const double delta = (c.ratio - cur_ratio).to_double();
            accept = u < std::exp(delta / temperature);
        }
        if (!accept) {
            cur[i] ^= 1;
            continue;
        }
        cur_size += cur[i] ? 1 : std::size_t(-1);
        cur_ratio = c.ratio;
        if (c.beats(best)) best = std::move(c);
    }
    return to_estimate(best, alpha, "anneal", EstimateMode::heuristic);
}

TauberianEstimate run_search(const SearchConfig& config, const Rational& alpha) {
    switch (config.strategy) {
        case Strategy::exhaustive: return exhaustive_search(config.resolved_window(), alpha, config.op);
        case Strategy::interval_family:
            return family_search(Family::intervals, config.family_max, alpha, config.op, config.dim);
        case Strategy::product_family:
            return family_search(Family::products, config.family_max, alpha, config.op, config.dim);
        case Strategy::staircase_family:
            return family_search(Family::staircases, config.family_max, alpha, config.op, config.dim);
        case Strategy::box_family:
            return family_search(Family::boxes, config.family_max, alpha, config.op, config.dim);
        case Strategy::anneal: return anneal_search(config, alpha);
    }
    throw DomainError("unknown strategy");
}

SweepResult sweep(const std::vector<Rational>& grid, const SearchConfig& config) {
    if (grid.empty()) throw DomainError("sweep grid is empty");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        require_unit_open(grid[i], "grid alpha");
        if (i > 0 && !(grid[i - 1] < grid[i])) throw DomainError("sweep grid must be strictly increasing");
    }
    SweepResult out{config, {}};
    for (const auto& alpha : grid) {
        auto est = run_search(config, alpha);
        const auto h = est.halo_measure.numerator();
        out.rows.push_back(SweepRow{alpha, std::move(est), static_cast<std::int64_t>(h)});
    }
    // Envelope: a witness's ratio is nonincreasing in alpha, so the pointwise
    // maximum over all found witnesses is too.
    std::vector<TauberianEstimate> own;
    for (const auto& r : out.rows) own.push_back(r.estimate);
    for (auto& row : out.rows) {
        for (const auto& other : own) {
            const auto& w = std::get<LatticeSet>(other.witness);
            auto [h, r] = halo_ratio_of(w, row.alpha, config.op);
            if (r > row.estimate.value) {
                row.estimate = TauberianEstimate{row.alpha,
                                                 r,
                                                 w,
                                                 Rational(static_cast<std::int64_t>(w.size())),
                                                 Rational(h),
                                                 other.strategy,
                                                 EstimateMode::heuristic};
                row.halo_size = h;
            }
        }
    }
    return out;
}

bool certify(const TauberianEstimate& estimate, Operator op) {
    const auto* set = std::get_if<LatticeSet>(&estimate.witness);
    if (set == nullptr) throw DomainError("only lattice witnesses can be certified here");
    if (set->empty()) return false;
    const auto [h, r] = halo_ratio_of(*set, estimate.alpha, op);
    return r == estimate.value && Rational(h) == estimate.halo_measure &&
           Rational(static_cast<std::int64_t>(set->size())) == estimate.witness_measure;
}

std::vector<CurvePoint> curve_of(const SweepResult& s) {
    std::vector<CurvePoint> c;
    for (const auto& r : s.rows) c.push_back({r.alpha, r.estimate.value});
    return c;
}

ModulusReport holder_modulus(const std::vector<CurvePoint>& curve, const Rational& p) {
    if (curve.size() < 3) throw DomainError("Holder modulus needs at least 3 curve points");
    if (p <= Rational(0)) throw DomainError("Holder exponent must be positive");
    auto pts = curve;
    std::sort(pts.begin(), pts.end(), [](const CurvePoint& a, const CurvePoint& b) { return a.alpha < b.alpha; });
    for (std::size_t i = 1; i < pts.size(); ++i) {
        if (pts[i].alpha == pts[i - 1].alpha) throw DomainError("Holder modulus needs distinct alphas");
    }
    ModulusReport rep;
    rep.exponent = p;
    rep.disclaimer = kModulusDisclaimer;
    const bool exact = p == Rational(1);
    Rational best_exact(0);
    const double pd = p.to_double();
    bool first = true;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            ++rep.pairs;
            Rational dv = pts[j].value - pts[i].value;
            if (dv < Rational(0)) dv = -dv;
            const Rational da = pts[j].alpha - pts[i].alpha;
            bool better = false;
            if (exact) {
                const Rational q = dv / da;
                better = first || q > best_exact;
                if (better) best_exact = q;
            } else {
                const double q = dv.to_double() / std::pow(da.to_double(), pd);
                better = first || q > rep.max_quotient;
                if (better) rep.max_quotient = q;
            }
            if (better) rep.argmax = {pts[i].alpha, pts[j].alpha};
            first = false;
        }
    }
    if (exact) {
        rep.max_quotient_exact = best_exact;
        rep.max_quotient = best_exact.to_double();
    }
    return rep;
}

SolyanikReport solyanik_probe(const std::vector<CurvePoint>& curve) {
    std::vector<double> xs, ys;
    for (const auto& c : curve) {
        if (c.alpha < Rational(9, 10) || c.alpha >= Rational(1) || c.value <= Rational(1)) continue;
        xs.push_back(std::log(1.0 / c.alpha.to_double() - 1.0));
        ys.push_back(std::log((c.value - Rational(1)).to_double()));
    }
    if (xs.size() < 4) {
        throw DomainError("Solyanik probe needs at least 4 points with 9/10 <= alpha < 1 and value > 1, got " +
                          std::to_string(xs.size()));
    }
    const auto m = static_cast<double>(xs.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
    }
    const double mx = sx / m, my = sy / m;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx == 0) throw DomainError("Solyanik probe needs distinct alphas");
    SolyanikReport rep;
    rep.points = xs.size();
    rep.slope = sxy / sxx;
    rep.intercept = my - rep.slope * mx;
    for (std::size_t i = 0; i < xs.size(); ++i) rep.residuals.push_back(ys[i] - (rep.intercept + rep.slope * xs[i]));
    rep.disclaimer = kSolyanikDisclaimer;
    return rep;
}

}  // namespace taublab::search
