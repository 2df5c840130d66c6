#include "taublab/verify.hpp"

#include "taublab/ergodic.hpp"
#include "taublab/lattice_maximal.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace taublab::verify {

namespace {

using ergodic::AtomicSystem;

Check check(std::string name, bool pass, std::string detail) {
    return Check{std::move(name), pass, std::move(detail)};
}

std::string set_str(const LatticeSet& E) {
    std::ostringstream os;
    os << '{';
    for (std::size_t i = 0; i < E.size(); ++i) {
        auto p = E.point(i);
        os << (i ? "," : "");
        if (p.size() == 1) {
            os << p[0];
        } else {
            os << '(';
            for (std::size_t a = 0; a < p.size(); ++a) os << (a ? "," : "") << p[a];
            os << ')';
        }
    }
    return os.str() + '}';
}

AtomicSystem identity_system(const std::vector<Rational>& masses) {
    ergodic::Permutation id(masses.size());
    for (std::size_t i = 0; i < id.size(); ++i) id[i] = i;
    return AtomicSystem(ergodic::SystemSpec{masses, 1, {id}});
}

/// Every nonempty subset of {0..11} and `count` random sets, against a ceiling.
template <typename Ratio, typename Ceiling>
void ceiling_suite(Report& r, const char* label, std::uint64_t seed, std::size_t count, Ratio ratio,
                   Ceiling ceiling) {
    const std::vector<Rational> alphas{Rational(1, 4), Rational(1, 2), Rational(3, 4)};
    for (const auto& alpha : alphas) {
        Rational worst(0);
        LatticeSet arg;
        for (std::uint32_t mask = 1; mask < (1U << 12); ++mask) {
            std::vector<Coord> xs;
            for (Coord b = 0; b < 12; ++b) {
                if (mask >> b & 1U) xs.push_back(b);
            }
            const LatticeSet E = LatticeSet::line(xs);
            const Rational v = ratio(E, alpha);
            if (v > worst) {
                worst = v;
                arg = E;
            }
        }
        r.checks.push_back(check(std::string(label) + " on all subsets of {0..11}, alpha " + alpha.str(),
                                 worst <= ceiling(alpha),
                                 "max " + worst.str() + " at " + set_str(arg) + " <= " + ceiling(alpha).str()));
    }
    std::mt19937_64 rng(seed);
    std::size_t violations = 0;
    std::string first;
    for (std::size_t i = 0; i < count; ++i) {
        const LatticeSet E = random_line_set(rng, 40, 12);
        const Rational alpha = random_alpha(rng, 20);
        const Rational v = ratio(E, alpha);
        if (v > ceiling(alpha)) {
            if (violations++ == 0) first = set_str(E) + " at alpha " + alpha.str() + " gives " + v.str();
        }
    }
    r.checks.push_back(check(std::string(label) + " on " + std::to_string(count) + " random sets (seed " +
                                 std::to_string(seed) + ")",
                             violations == 0,
                             violations == 0 ? "no violations" : std::to_string(violations) + " violations, first " + first));
}

}  // namespace

bool Report::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

LatticeSet random_line_set(std::mt19937_64& rng, std::int64_t span, std::size_t max_points) {
    const std::size_t size = 1 + static_cast<std::size_t>(rng() % max_points);
    std::vector<Coord> xs;
    for (std::size_t i = 0; i < size; ++i) xs.push_back(static_cast<Coord>(rng() % static_cast<std::uint64_t>(span)));
    return LatticeSet::line(xs);
}

Rational random_alpha(std::mt19937_64& rng, std::int64_t max_den) {
    const auto q = 2 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(max_den - 1));
    const auto p = 1 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(q - 1));
    return Rational(p, q);
}

Report example1() {
    Report r{"example1", {}};
    const AtomicSystem sys = ergodic::make_cyclic(2);
    const std::vector<std::pair<Rational, Rational>> table{
        {Rational(1, 2), Rational(2)}, {Rational(2, 3), Rational(1)}, {Rational(3, 4), Rational(1)}};
    for (const auto& [alpha, expected] : table) {
        const auto est = ergodic::exact_tauberian(sys, alpha);
        r.checks.push_back(check("C(" + alpha.str() + ")", est.value == expected,
                                 est.value.str() + " (expected " + expected.str() + ")"));
    }
    std::set<Rational> values;
    for (const AtomSet& E : {AtomSet{0}, AtomSet{1}, AtomSet{0, 1}}) {
        for (std::size_t x = 0; x < 2; ++x) values.insert(ergodic::eval_ergodic_max(sys, E, x));
    }
    std::string listed;
    for (const auto& v : values) listed += (listed.empty() ? "" : ", ") + v.str();
    const std::set<Rational> allowed{Rational(0), Rational(2, 3), Rational(1)};
    r.checks.push_back(check("maximal values lie in {0, 2/3, 1}",
                             std::includes(allowed.begin(), allowed.end(), values.begin(), values.end()),
                             "observed {" + listed + "}"));
    return r;
}

Report jump(std::size_t n) {
    Report r{"jump " + std::to_string(n), {}};
    const auto N = static_cast<std::int64_t>(n);
    const Rational at(2 * N - 2, 2 * N - 1);
    const Rational eps(1, 100);
    const auto prof = ergodic::jump_profile(n, {at - eps, at + eps});
    for (const auto& row : prof.rows) {
        if (row.side == ergodic::JumpRow::Side::below) {
            r.checks.push_back(check("C(" + row.alpha.str() + ") >= " + prof.lower_bound.str(),
                                     row.constant.value >= prof.lower_bound,
                                     "exhaustive value " + row.constant.value.str()));
            r.checks.push_back(check("tower witness {T a, ..., T^" + std::to_string(n - 1) + " a} at " +
                                         row.alpha.str(),
                                     row.tower_witness_ratio >= prof.lower_bound,
                                     "ratio " + row.tower_witness_ratio.str()));
        } else {
            r.checks.push_back(check("C(" + row.alpha.str() + ") = 1", row.constant.value == Rational(1),
                                     "exhaustive value " + row.constant.value.str()));
        }
    }
    return r;
}

Report index_collapse() {
    Report r{"index-collapse", {}};
    const std::vector<std::vector<Rational>> systems{
        {Rational(1)},
        {Rational(1, 2), Rational(1, 2)},
        {Rational(1, 4), Rational(1, 4), Rational(1, 2)},
        {Rational(1, 10), Rational(2, 10), Rational(3, 10), Rational(4, 10)},
    };
    for (const auto& masses : systems) {
        const AtomicSystem sys = identity_system(masses);
        const std::string label = "identity, " + std::to_string(masses.size()) + " atom(s)";
        const auto idx = ergodic::index(sys);
        r.checks.push_back(check(label + ": index 1", idx.value && *idx.value == 1,
                                 "index " + (idx.value ? std::to_string(*idx.value) : std::string("inf"))));
        for (const Rational& alpha : {Rational(1, 4), Rational(1, 2), Rational(3, 4)}) {
            const auto est = ergodic::exact_tauberian(sys, alpha);
            r.checks.push_back(check(label + ": C(" + alpha.str() + ") = 1", est.value == Rational(1),
                                     "exhaustive value " + est.value.str()));
        }
    }
    return r;
}

Report transfer(std::uint64_t seed, std::size_t count) {
    Report r{"transfer", {}};
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < count; ++i) {
        const LatticeSet E = random_line_set(rng, 10, 6);
        const Rational alpha = random_alpha(rng, 10);
        const auto discrete = lattice::halo(E, alpha);
        std::int64_t radius = 0;
        for (std::size_t j = 0; j < discrete.members.size(); ++j) {
            radius = std::max<std::int64_t>(radius, std::abs(discrete.members.point(j)[0]));
        }
        const auto M = static_cast<std::size_t>(8 * (radius + 1));
        const auto res = ergodic::transfer_witness(ergodic::make_cyclic(M), E, alpha);
        const bool ge = res.ergodic_ratio >= res.discrete_ratio;
        const bool eq_ok = res.wraparound.value_or(true) || res.ergodic_ratio == res.discrete_ratio;
        std::string detail = set_str(E) + " alpha " + alpha.str() + " N " + std::to_string(radius) + " M " +
                             std::to_string(M) + ": ergodic " + res.ergodic_ratio.str() + ", discrete " +
                             res.discrete_ratio.str() + (res.wraparound.value_or(false) ? ", wraparound" : "");
        r.checks.push_back(check("witness " + std::to_string(i + 1), ge && eq_ok, std::move(detail)));
    }
    return r;
}

Report one_sided(std::uint64_t seed, std::size_t count) {
    Report r{"one-sided", {}};
    ceiling_suite(
        r, "one-sided ratio <= 1/alpha", seed, count,
        [](const LatticeSet& E, const Rational& a) { return lattice::one_sided_halo_ratio(E, a); },
        [](const Rational& a) { return Rational(1) / a; });
    const Rational v = lattice::one_sided_halo_ratio(LatticeSet::interval(0, 60), Rational(1, 2));
    r.checks.push_back(check("interval k = 60 at 1/2", v == Rational(119, 60), v.str() + " (expected 119/60)"));
    const AtomicSystem sys = ergodic::make_cyclic(2);
    const std::vector<std::pair<Rational, Rational>> table{{Rational(1, 10), Rational(2)},
                                                           {Rational(1, 3), Rational(2)},
                                                           {Rational(49, 100), Rational(2)},
                                                           {Rational(1, 2), Rational(1)},
                                                           {Rational(3, 4), Rational(1)}};
    for (const auto& [alpha, expected] : table) {
        const auto est = ergodic::one_sided_exact_tauberian(sys, alpha);
        r.checks.push_back(check("2-cycle one-sided C(" + alpha.str() + ")", est.value == expected,
                                 est.value.str() + " (expected " + expected.str() + ")"));
    }
    return r;
}

Report ceiling_1d(std::uint64_t seed, std::size_t count) {
    Report r{"ceiling-1d", {}};
    ceiling_suite(
        r, "halo ratio <= 2/alpha - 1", seed, count,
        [](const LatticeSet& E, const Rational& a) { return lattice::halo_ratio(E, a); },
        [](const Rational& a) { return Rational(2) / a - Rational(1); });
    for (const auto& [k, floor] : std::vector<std::pair<std::int64_t, Rational>>{{60, Rational(295, 100)},
                                                                                  {600, Rational(2995, 1000)}}) {
        const auto est = lattice::interval_witness(k, Rational(1, 2));
        r.checks.push_back(check("interval k = " + std::to_string(k) + " at 1/2 >= " + floor.str(),
                                 est.value >= floor && est.value <= Rational(3), est.value.str()));
    }
    return r;
}

}  // namespace taublab::verify
