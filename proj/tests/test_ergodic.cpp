#include "generators.hpp"
#include "oracles.hpp"

#include "taublab/ergodic.hpp"
#include "taublab/errors.hpp"
#include "taublab/lattice_maximal.hpp"

#include <doctest.h>

#include <random>
#include <set>

using taublab::AtomSet;
using taublab::LatticeSet;
using taublab::Rational;
using namespace taublab::ergodic;
using gen::random_line_system;
using gen::random_permutation;

namespace {

/// A small torus with its atoms relabeled at random.
AtomicSystem random_torus_system(std::mt19937_64& rng) {
    const std::size_t a = 1 + rng() % 3, b = 1 + rng() % 3;
    const AtomicSystem t = make_torus({a, b});
    const Permutation s = random_permutation(rng, t.atom_count());
    SystemSpec spec{t.masses(), 2, {}};
    for (std::size_t g = 0; g < 2; ++g) {
        Permutation q(t.atom_count());
        for (std::size_t x = 0; x < q.size(); ++x) q[s[x]] = s[t.generator(g)[x]];
        spec.generators.push_back(q);
    }
    return AtomicSystem(spec);
}

AtomSet random_atoms(std::mt19937_64& rng, std::size_t k) {
    AtomSet E;
    while (E.empty()) {
        for (std::size_t x = 0; x < k; ++x) {
            if (rng() % 2) E.push_back(x);
        }
    }
    return E;
}

Rational random_alpha(std::mt19937_64& rng, std::int64_t max_den) {
    const auto q = 2 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(max_den - 1));
    return Rational(1 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(q - 1)), q);
}

Rational per_atom_halo(const AtomicSystem& sys, const AtomSet& E, const Rational& alpha) {
    Rational m(0);
    for (std::size_t x = 0; x < sys.atom_count(); ++x) {
        if (eval_ergodic_max(sys, E, x) > alpha) m += sys.mass(x);
    }
    return m;
}

const Rational half(1, 2);

}  // namespace

TEST_CASE("validate_system examples") {
    const Permutation swap{1, 0};
    CHECK(validate_system(SystemSpec{{half, half}, 1, {swap}}).ok);
    const auto bad_mass = validate_system(SystemSpec{{Rational(1, 3), Rational(2, 3)}, 1, {swap}});
    CHECK_FALSE(bad_mass.ok);
    CHECK(bad_mass.code == "mass not preserved");
    CHECK(bad_mass.atoms == std::vector<std::size_t>{0, 1});
    const Rational third(1, 3);
    const auto noncommuting = validate_system(SystemSpec{{third, third, third}, 2, {{1, 0, 2}, {0, 2, 1}}});
    CHECK_FALSE(noncommuting.ok);
    CHECK(noncommuting.code == "generators do not commute");
}

TEST_CASE("validate_system reports the first violated invariant") {
    CHECK(validate_system(SystemSpec{{}, 1, {}}).code == "no atoms");
    CHECK(validate_system(SystemSpec{{Rational(0), Rational(1)}, 1, {{0, 1}}}).code == "nonpositive mass");
    CHECK(validate_system(SystemSpec{{half, Rational(1, 3)}, 1, {{0, 1}}}).code == "masses do not sum to 1");
    CHECK(validate_system(SystemSpec{{half, half}, 2, {{0, 1}}}).code == "dimension");
    CHECK(validate_system(SystemSpec{{half, half}, 1, {{0, 0}}}).code == "not a bijection");
    CHECK(validate_system(SystemSpec{{half, half}, 1, {{0, 2}}}).code == "not a bijection");
    CHECK(validate_system(SystemSpec{{half, half}, 1, {{0}}}).code == "not a bijection");
    CHECK_THROWS_AS(AtomicSystem(SystemSpec{{half, half}, 1, {{0, 0}}}), taublab::DomainError);
}

TEST_CASE("cyclic and torus constructors") {
    const AtomicSystem c2 = make_cyclic(2);
    CHECK(c2.atom_count() == 2);
    CHECK(c2.generator(0) == Permutation{1, 0});
    CHECK(c2.mass(0) == half);
    const AtomicSystem c1 = make_cyclic(1);
    CHECK(index(c1).value == 1u);
    const AtomicSystem t = make_torus({3, 4});
    CHECK(t.atom_count() == 12);
    CHECK(t.dim() == 2);
    CHECK(t.mass(5) == Rational(1, 12));
    CHECK(t.generator(1)[0] == 1);  // last coordinate fastest
    CHECK(t.generator(0)[0] == 4);
    CHECK(t.period(0, 0) == 3);
    CHECK(t.period(1, 0) == 4);
    CHECK(validate_system(SystemSpec{t.masses(), 2, {t.generator(0), t.generator(1)}}).ok);
    CHECK_THROWS_AS(make_cyclic(0), taublab::DomainError);
    CHECK_THROWS_AS(make_torus({3, 0}), taublab::DomainError);
}

TEST_CASE("step, act and period") {
    const AtomicSystem c5 = make_cyclic(5);
    CHECK(c5.step(0, 0, 3) == 3);
    CHECK(c5.step(0, 0, -1) == 4);
    CHECK(c5.step(0, 2, -12) == 0);
    const AtomicSystem t = make_torus({2, 3});
    const std::vector<std::int64_t> off{1, -1};
    CHECK(t.act(off, 0) == 5);
    CHECK_THROWS_AS(t.act(std::vector<std::int64_t>{1}, 0), taublab::DomainError);
}

TEST_CASE("set helpers") {
    const AtomicSystem c4 = make_cyclic(4);
    CHECK(make_atom_set(c4, {3, 1, 3}) == AtomSet{1, 3});
    CHECK_THROWS_AS(make_atom_set(c4, {4}), taublab::DomainError);
    CHECK(measure(c4, {0, 2}) == half);
    CHECK(apply_generator(c4, 0, {0, 3}) == AtomSet{0, 1});
}

TEST_CASE("eval_ergodic_max examples") {
    const AtomicSystem c2 = make_cyclic(2);
    CHECK(eval_ergodic_max(c2, {0}, 1) == Rational(2, 3));
    CHECK(eval_ergodic_max(c2, {0}, 0) == Rational(1));
    const AtomicSystem c3 = make_cyclic(3);
    CHECK(eval_ergodic_max(c3, {1, 2}, 0) == Rational(4, 5));
    const AtomicSystem t = make_torus({2, 3});
    CHECK(eval_ergodic_max(t, {4}, 4) == Rational(1));
    CHECK_THROWS_AS(eval_ergodic_max(c2, {}, 0), taublab::DomainError);
    CHECK_THROWS_AS(eval_ergodic_max(c2, {0}, 2), taublab::DomainError);
    CHECK_THROWS_AS(eval_ergodic_max(c2, {5}, 0), taublab::DomainError);
}

TEST_CASE("ergodic_halo_measure examples") {
    const AtomicSystem c2 = make_cyclic(2);
    CHECK(ergodic_halo_measure(c2, {0}, half) == Rational(1));
    CHECK(ergodic_halo_measure(c2, {0}, Rational(3, 4)) == half);
    CHECK(ergodic_halo(c2, {0}, Rational(3, 4)) == AtomSet{0});
    const AtomicSystem t = make_torus({3, 2});
    CHECK(ergodic_halo_measure(t, {0, 1, 2, 3, 4, 5}, Rational(9, 10)) == Rational(1));
    CHECK_THROWS_AS(ergodic_halo_measure(c2, {0}, Rational(1)), taublab::DomainError);
}

TEST_CASE("exact_tauberian examples") {
    const AtomicSystem c2 = make_cyclic(2);
    const auto e = exact_tauberian(c2, half);
    CHECK(e.value == Rational(2));
    CHECK(std::get<AtomSet>(e.witness) == AtomSet{0});
    CHECK(e.mode == taublab::EstimateMode::exact);
    CHECK(e.witness_measure == half);
    CHECK(e.halo_measure == Rational(1));
    CHECK(exact_tauberian(c2, Rational(3, 4)).value == Rational(1));
    const AtomicSystem c3 = make_cyclic(3);
    const auto e3 = exact_tauberian(c3, Rational(7, 10));
    CHECK(e3.value >= Rational(3, 2));
    CHECK(e3.value == oracle::tauberian(c3, Rational(7, 10)));
    CHECK_THROWS_AS(exact_tauberian(c2, Rational(0)), taublab::DomainError);
}

TEST_CASE("index examples") {
    for (std::size_t n = 1; n <= 12; ++n) {
        const AtomicSystem c = make_cyclic(n);
        const auto r = index(c);
        REQUIRE(r.value == n);
        REQUIRE(oracle::index(c) == n);
        REQUIRE(tower_is_disjoint(c, r.certificate));
    }
    const Rational q(1, 4);
    const AtomicSystem id(SystemSpec{{q, q, q, q}, 1, {{0, 1, 2, 3}}});
    CHECK(index(id).value == 1u);
    const AtomicSystem mixed(SystemSpec{{q, q, q, q}, 1, {{1, 2, 0, 3}}});
    CHECK(index(mixed).value == 3u);
    CHECK(oracle::index(mixed) == 3u);
    CHECK(index(mixed).certificate.base == AtomSet{0});
    CHECK_THROWS_AS(index(make_torus({2, 2})), taublab::DomainError);
}

TEST_CASE("jump_profile examples") {
    const auto p2 = jump_profile(2, {half, Rational(3, 4)});
    CHECK(p2.jump_at == Rational(2, 3));
    CHECK(p2.rows[0].constant.value == Rational(2));
    CHECK(p2.rows[1].constant.value == Rational(1));
    CHECK(p2.all_hold());
    const auto p3 = jump_profile(3, {Rational(7, 10), Rational(4, 5), Rational(9, 10)});
    CHECK(p3.rows[0].constant.value >= Rational(3, 2));
    CHECK(p3.rows[0].tower_witness_ratio >= Rational(3, 2));
    CHECK(p3.rows[1].side == JumpRow::Side::at);
    CHECK(p3.rows[2].constant.value == Rational(1));
    CHECK(p3.all_hold());
    const Rational j4(6, 7), eps(1, 100);
    const auto p4 = jump_profile(4, {j4 - eps, j4 + eps});
    CHECK(p4.rows[0].constant.value >= Rational(4, 3));
    CHECK(p4.rows[1].constant.value == Rational(1));
    CHECK_THROWS_AS(jump_profile(21, {half}), taublab::DomainError);
    CHECK_THROWS_AS(jump_profile(1, {half}), taublab::DomainError);
}

TEST_CASE("exhaustive constants below the jump are frozen") {
    // Values from the brute-force tauberian oracle.
    const std::vector<std::pair<std::size_t, Rational>> frozen{
        {2, Rational(2)}, {3, Rational(3, 2)}, {4, Rational(4, 3)}, {5, Rational(5, 4)}};
    for (const auto& [n, value] : frozen) {
        const auto N = static_cast<std::int64_t>(n);
        const Rational alpha = Rational(2 * N - 2, 2 * N - 1) - Rational(1, 100);
        const AtomicSystem c = make_cyclic(n);
        CHECK(exact_tauberian(c, alpha).value == value);
        CHECK(oracle::tauberian(c, alpha) == value);
    }
}

TEST_CASE("rokhlin_tower examples") {
    const auto t8 = rokhlin_tower(make_torus({8}), {5});
    CHECK(t8.base == AtomSet{0});
    CHECK(tower_is_disjoint(make_torus({8}), t8));
    const AtomicSystem t44 = make_torus({4, 4});
    const auto t = rokhlin_tower(t44, {3, 3});
    CHECK(t.base.size() == 1);
    CHECK(tower_is_disjoint(t44, t));
    CHECK_THROWS_AS(rokhlin_tower(make_torus({2}), {3}), taublab::DomainError);
    CHECK_THROWS_AS(rokhlin_tower(t44, {3}), taublab::DomainError);
    CHECK_FALSE(tower_is_disjoint(make_cyclic(3), TowerBase{{0}, {4}}));
    // a non-torus system with a long enough cycle still gets a base
    const Rational q(1, 4);
    const AtomicSystem mixed(SystemSpec{{q, q, q, q}, 1, {{0, 2, 3, 1}}});
    CHECK(rokhlin_tower(mixed, {3}).base == AtomSet{1});
    CHECK_THROWS_AS(rokhlin_tower(mixed, {4}), taublab::DomainError);
}

TEST_CASE("transfer_witness examples") {
    const auto r = transfer_witness(make_cyclic(100), LatticeSet::line({0, 1}), half);
    CHECK(r.discrete_ratio == Rational(2));
    CHECK(r.ergodic_ratio == Rational(2));
    CHECK(r.wraparound == false);
    CHECK(r.radius == 2);
    CHECK(r.halo_image.size() == 4);
    CHECK(r.set.size() == 2);

    const auto r1 = transfer_witness(make_cyclic(10), LatticeSet::line({0}), Rational(2, 3));
    CHECK(r1.discrete_ratio == Rational(1));
    CHECK(r1.ergodic_ratio == Rational(1));

    const auto r60 = transfer_witness(make_cyclic(4096), LatticeSet::interval(0, 60), half);
    CHECK(r60.discrete_ratio == Rational(89, 30));
    CHECK(r60.ergodic_ratio >= Rational(89, 30));
    CHECK(r60.wraparound == false);
    CHECK(r60.ergodic_ratio == Rational(89, 30));
}

TEST_CASE("transfer_witness wraparound and room") {
    // halo {-1..2} needs 5 distinct translates; in a 5-cycle the two copies interact
    const auto r = transfer_witness(make_cyclic(5), LatticeSet::line({0, 1}), half);
    CHECK(r.wraparound == true);
    CHECK(r.ergodic_ratio == Rational(5, 2));
    CHECK(r.ergodic_ratio >= r.discrete_ratio);
    CHECK_THROWS_WITH_AS(transfer_witness(make_cyclic(4), LatticeSet::line({0, 1}), half),
                         doctest::Contains("at least 5"), taublab::DomainError);
    const auto t2 = transfer_witness(make_torus({9, 9}), LatticeSet(2, {{0, 0}, {1, 1}}), Rational(1, 3));
    CHECK(t2.ergodic_ratio >= t2.discrete_ratio);
    CHECK_FALSE(t2.wraparound.has_value());
    CHECK_THROWS_AS(transfer_witness(make_cyclic(9), LatticeSet(2, {{0, 0}}), half), taublab::DomainError);
}

TEST_CASE("one-sided ergodic examples") {
    const AtomicSystem c2 = make_cyclic(2);
    CHECK(one_sided_ergodic_max(c2, {0}, 1) == half);
    CHECK(one_sided_ergodic_max(c2, {0}, 0) == Rational(1));
    CHECK(one_sided_exact_tauberian(c2, Rational(1, 3)).value == Rational(2));
    CHECK(one_sided_exact_tauberian(c2, half).value == Rational(1));
    CHECK(one_sided_exact_tauberian(c2, Rational(3, 4)).value == Rational(1));
    CHECK_THROWS_AS(one_sided_ergodic_max(make_torus({2, 2}), {0}, 0), taublab::DomainError);
    CHECK_THROWS_AS(one_sided_exact_tauberian(make_torus({2, 2}), half), taublab::DomainError);
}

TEST_CASE("one-sided constant of the 64-cycle at 1/2 is close to 2") {
    const auto e = one_sided_exact_tauberian(make_cyclic(64), half);
    CHECK(e.mode == taublab::EstimateMode::heuristic);
    CHECK(e.value > Rational(19, 10));
    CHECK(e.value <= Rational(2));
    CHECK(one_sided_halo_measure(make_cyclic(64), std::get<AtomSet>(e.witness), half) /
              measure(make_cyclic(64), std::get<AtomSet>(e.witness)) ==
          e.value);
}

TEST_CASE("one-sided values approach 1/alpha from below on growing cycles") {
    const Rational alpha(1, 3);
    Rational prev(0);
    for (std::size_t n : {3, 6, 12}) {
        const Rational v = one_sided_exact_tauberian(make_cyclic(n), alpha).value;
        REQUIRE(v <= Rational(3));
        REQUIRE(v >= prev);
        prev = v;
    }
    CHECK(prev > Rational(5, 2));
}

TEST_CASE("heuristic mode past the enumeration threshold") {
    const AtomicSystem c = make_cyclic(24);
    const auto e = exact_tauberian(c, half, TauberianOptions{20, 500});
    CHECK(e.mode == taublab::EstimateMode::heuristic);
    CHECK(e.value <= Rational(3));
    CHECK(ergodic_halo_measure(c, std::get<AtomSet>(e.witness), half) / measure(c, std::get<AtomSet>(e.witness)) ==
          e.value);
    const auto exact = exact_tauberian(make_cyclic(6), half, TauberianOptions{6, 10});
    CHECK(exact.mode == taublab::EstimateMode::exact);
}

TEST_CASE("oracle: ergodic maximal values on random systems") {
    std::mt19937_64 rng(53);
    for (int trial = 0; trial < 120; ++trial) {
        const AtomicSystem sys = trial % 3 == 0 ? random_torus_system(rng) : random_line_system(rng, 1 + rng() % 7);
        const AtomSet E = random_atoms(rng, sys.atom_count());
        const auto side = (sys.dim() == 1 ? 4 : 2) * static_cast<std::int64_t>(sys.atom_count());
        for (std::size_t x = 0; x < sys.atom_count(); ++x) {
            REQUIRE(eval_ergodic_max(sys, E, x) == oracle::ergodic_max(sys, E, x, side));
        }
    }
}

TEST_CASE("oracle: window bound soundness on systems with at most 8 atoms") {
    std::mt19937_64 rng(59);
    for (int trial = 0; trial < 200; ++trial) {
        const AtomicSystem sys = trial % 4 == 0 ? random_torus_system(rng) : random_line_system(rng, 1 + rng() % 8);
        const AtomSet E = random_atoms(rng, sys.atom_count());
        const std::size_t k = sys.atom_count();
        for (std::size_t x = 0; x < k; ++x) {
            const Rational v2 = eval_ergodic_max(sys, E, x, WindowBound{2 * k});
            REQUIRE(v2 == eval_ergodic_max(sys, E, x, WindowBound{4 * k}));
            REQUIRE(v2 == eval_ergodic_max(sys, E, x));
        }
    }
}

TEST_CASE("oracle: halo routes agree") {
    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 150; ++trial) {
        const AtomicSystem sys = random_line_system(rng, 1 + rng() % 12);
        const AtomSet E = random_atoms(rng, sys.atom_count());
        const Rational alpha = random_alpha(rng, 12);
        REQUIRE(ergodic_halo_measure(sys, E, alpha) == per_atom_halo(sys, E, alpha));
        Rational one_sided(0);
        for (std::size_t x = 0; x < sys.atom_count(); ++x) {
            if (one_sided_ergodic_max(sys, E, x) > alpha) one_sided += sys.mass(x);
        }
        REQUIRE(one_sided_halo_measure(sys, E, alpha) == one_sided);
    }
}

TEST_CASE("oracle: exhaustive constants and index on random systems") {
    std::mt19937_64 rng(67);
    for (int trial = 0; trial < 30; ++trial) {
        const AtomicSystem sys = trial % 5 == 0 ? random_torus_system(rng) : random_line_system(rng, 1 + rng() % 5);
        const Rational alpha = random_alpha(rng, 8);
        REQUIRE(exact_tauberian(sys, alpha).value == oracle::tauberian(sys, alpha));
        if (sys.dim() == 1) REQUIRE(index(sys).value == oracle::index(sys));
    }
}

TEST_CASE("property: trichotomy on the 2-cycle") {
    const AtomicSystem c2 = make_cyclic(2);
    const std::set<Rational> allowed{Rational(0), Rational(2, 3), Rational(1)};
    for (const AtomSet& E : {AtomSet{0}, AtomSet{1}, AtomSet{0, 1}}) {
        for (std::size_t x = 0; x < 2; ++x) CHECK(allowed.count(eval_ergodic_max(c2, E, x)) == 1);
    }
}

TEST_CASE("property: measures are invariant under the action") {
    std::mt19937_64 rng(71);
    for (int trial = 0; trial < 60; ++trial) {
        const AtomicSystem sys = trial % 2 ? random_torus_system(rng) : random_line_system(rng, 1 + rng() % 9);
        const AtomSet E = random_atoms(rng, sys.atom_count());
        const Rational alpha = random_alpha(rng, 10);
        for (std::size_t g = 0; g < sys.dim(); ++g) {
            const AtomSet F = apply_generator(sys, g, E);
            REQUIRE(measure(sys, F) == measure(sys, E));
            REQUIRE(ergodic_halo_measure(sys, F, alpha) == ergodic_halo_measure(sys, E, alpha));
        }
    }
}

TEST_CASE("property: ceilings, collapse and tower disjointness") {
    std::mt19937_64 rng(73);
    for (int trial = 0; trial < 40; ++trial) {
        const AtomicSystem sys = random_line_system(rng, 1 + rng() % 8);
        const Rational alpha = random_alpha(rng, 12);
        const auto e = exact_tauberian(sys, alpha);
        REQUIRE(e.value <= Rational(2) / alpha - Rational(1));
        REQUIRE(one_sided_exact_tauberian(sys, alpha).value <= Rational(1) / alpha);
        if (index(sys).value == 1u) REQUIRE(e.value == Rational(1));
    }
    for (std::size_t a = 1; a <= 4; ++a) {
        for (std::size_t b = 1; b <= 4; ++b) {
            const AtomicSystem t = make_torus({a, b});
            for (std::size_t h1 = 1; h1 <= a; ++h1) {
                for (std::size_t h2 = 1; h2 <= b; ++h2) REQUIRE(tower_is_disjoint(t, rokhlin_tower(t, {h1, h2})));
            }
        }
    }
}

TEST_CASE("property: transfer inequality on random witnesses") {
    std::mt19937_64 rng(79);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<taublab::Coord> xs;
        for (std::size_t i = 0, k = 1 + rng() % 5; i < k; ++i) xs.push_back(static_cast<taublab::Coord>(rng() % 9));
        const LatticeSet E = LatticeSet::line(xs);
        const Rational alpha = random_alpha(rng, 8);
        const auto d = taublab::lattice::halo(E, alpha);
        std::int64_t N = 0;
        for (std::size_t i = 0; i < d.members.size(); ++i) N = std::max<std::int64_t>(N, std::abs(d.members.point(i)[0]));
        for (std::size_t M : {static_cast<std::size_t>(2 * N + 1), static_cast<std::size_t>(8 * (N + 1))}) {
            const auto r = transfer_witness(make_cyclic(M), E, alpha);
            REQUIRE(r.ergodic_ratio >= r.discrete_ratio);
            if (!*r.wraparound) REQUIRE(r.ergodic_ratio == r.discrete_ratio);
        }
    }
}
