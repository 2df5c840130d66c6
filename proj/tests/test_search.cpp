#include "oracles.hpp"

#include "taublab/errors.hpp"
#include "taublab/io.hpp"
#include "taublab/lattice_maximal.hpp"
#include "taublab/search.hpp"

#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

using taublab::IntBox;
using taublab::LatticeSet;
using taublab::Rational;
using namespace taublab::search;

namespace {

const Rational half(1, 2);

std::string golden(const std::string& name) {
    std::ifstream in(std::string(TAUBLAB_GOLDEN_DIR) + "/" + name, std::ios::binary);
    REQUIRE(in);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::vector<Rational> tenths() {
    std::vector<Rational> g;
    for (std::int64_t i = 1; i <= 9; ++i) g.emplace_back(i, 10);
    return g;
}

const LatticeSet& witness(const taublab::TauberianEstimate& e) { return std::get<LatticeSet>(e.witness); }

}  // namespace

TEST_CASE("exhaustive_search examples") {
    const auto small = exhaustive_search(IntBox({0}, {3}), half);
    // all four points: halo {-3..6}
    CHECK(small.value == Rational(5, 2));
    CHECK(witness(small) == LatticeSet::interval(0, 4));
    CHECK(small.mode == taublab::EstimateMode::exact);
    // single point: boxes of length at most 6 contain it
    CHECK(exhaustive_search(IntBox({0}, {0}), Rational(1, 7)).value == Rational(11));
    const auto big = exhaustive_search(IntBox({0}, {11}), half);
    CHECK(big.value < Rational(3));
    CHECK(big.value >= small.value);
    CHECK(big.value == Rational(17, 6));
    CHECK_THROWS_AS(exhaustive_search(IntBox({0}, {24}), half), taublab::DomainError);
    CHECK_THROWS_AS(exhaustive_search(IntBox({0, 0}, {4, 4}), half), taublab::DomainError);
    CHECK_THROWS_AS(exhaustive_search(IntBox({0, 0}, {1, 1}), half, Operator::one_sided), taublab::DomainError);
}

TEST_CASE("exhaustive search matches brute force over every subset of the window") {
    for (const auto& alpha : {Rational(1, 4), Rational(1, 2), Rational(2, 3)}) {
        Rational best(0);
        std::optional<LatticeSet> arg;
        for (std::uint32_t mask = 1; mask < (1U << 6); ++mask) {
            std::vector<taublab::Coord> xs;
            for (int b = 0; b < 6; ++b) {
                if (mask >> b & 1U) xs.push_back(b);
            }
            const LatticeSet E = LatticeSet::line(xs);
            const Rational r(static_cast<std::int64_t>(oracle::strong_halo(E, alpha).size()),
                             static_cast<std::int64_t>(E.size()));
            if (r > best || (r == best && E.translated(std::vector<taublab::Coord>{-xs[0]}) < *arg)) {
                best = r;
                arg = E.translated(std::vector<taublab::Coord>{-xs[0]});
            }
        }
        const auto e = exhaustive_search(IntBox({0}, {5}), alpha);
        CHECK(e.value == best);
        CHECK(witness(e) == *arg);
    }
    // 2-D window: compare with the library ratio over all subsets, canonical or not
    const Rational alpha(1, 3);
    const LatticeSet all = LatticeSet::from_box(IntBox({0, 0}, {1, 2}));
    Rational best(0);
    for (std::uint32_t mask = 1; mask < (1U << all.size()); ++mask) {
        std::vector<taublab::LatticePoint> pts;
        for (std::size_t b = 0; b < all.size(); ++b) {
            if (mask >> b & 1U) pts.push_back(all.point_value(b));
        }
        best = std::max(best, taublab::lattice::halo_ratio(LatticeSet(2, pts), alpha));
    }
    CHECK(exhaustive_search(IntBox({0, 0}, {1, 2}), alpha).value == best);
}

TEST_CASE("family_search examples") {
    const auto iv = family_search(Family::intervals, 60, half);
    CHECK(iv.value == Rational(89, 30));
    CHECK(iv.strategy == "interval-family");
    const auto prod = family_search(Family::products, 20, Rational(1, 4), Operator::strong, 2);
    CHECK(prod.value > Rational(7));
    CHECK(prod.value == Rational(2241, 100));
    // the diagonal {(i, i) : 0 <= i < 4} is the staircase with k = 4, t = 1
    const LatticeSet diag(2, {{0, 0}, {1, 1}, {2, 2}, {3, 3}});
    const auto members = family_members(Family::staircases, 4, 2);
    CHECK(std::find(members.begin(), members.end(), diag) != members.end());
    // 332 halo points, from the brute-force oracle
    CHECK(taublab::lattice::halo_ratio(diag, Rational(1, 16)) == Rational(83));
    const auto st = family_search(Family::staircases, 4, Rational(1, 16), Operator::strong, 2);
    CHECK(st.value >= Rational(83));
    CHECK_THROWS_AS(family_search(Family::intervals, 0, half), taublab::DomainError);
    CHECK_THROWS_AS(family_search(Family::products, 3, half, Operator::strong, 1), taublab::DomainError);
    CHECK_THROWS_AS(family_search(Family::products, 3, half, Operator::one_sided, 2), taublab::DomainError);
}

TEST_CASE("family members") {
    CHECK(family_members(Family::intervals, 3).size() == 3);
    CHECK(family_members(Family::products, 3, 2).size() == 6);
    CHECK(family_members(Family::staircases, 3, 2).size() == 6);
    CHECK(family_members(Family::boxes, 2, 3).back().size() == 8);
    CHECK(family_members(Family::staircases, 3, 2).back() ==
          LatticeSet(2, {{0, 0}, {0, 1}, {0, 2}, {1, 1}, {1, 2}, {1, 3}, {2, 2}, {2, 3}, {2, 4}}));
}

TEST_CASE("diagonal value against the oracle") {
    const LatticeSet diag(2, {{0, 0}, {1, 1}, {2, 2}});
    const Rational alpha(1, 5);
    CHECK(taublab::lattice::halo_size(diag, alpha) ==
          static_cast<std::int64_t>(oracle::strong_halo(diag, alpha).size()));
}

TEST_CASE("anneal examples") {
    SearchConfig c;
    c.window = IntBox({0}, {63});
    c.strategy = Strategy::anneal;
    c.seed = 42;
    c.budget = 10000;
    const auto e = anneal_search(c, half);
    CHECK(e.value >= exhaustive_search(IntBox({0}, {11}), half).value);
    CHECK(e.value == Rational(95, 32));
    CHECK(certify(e));

    SearchConfig zero;
    zero.window = IntBox({0}, {15});
    zero.budget = 0;
    zero.initial = {LatticeSet::interval(0, 8)};
    for (const auto& alpha : {Rational(1, 4), half, Rational(4, 5)}) {
        const auto z = anneal_search(zero, alpha);
        CHECK(z.value == taublab::lattice::interval_witness(8, alpha).value);
        CHECK(witness(z) == LatticeSet::interval(0, 8));
    }

    SearchConfig two;
    two.dim = 2;
    two.window = IntBox({0, 0}, {7, 7});
    two.seed = 7;
    two.budget = 2000;
    const Rational a(9, 10);
    const auto t = anneal_search(two, a);
    CHECK(t.value >= family_search(Family::products, 8, a, Operator::strong, 2).value);
    CHECK(t.value == Rational(13, 9));
    CHECK(certify(t));

    zero.initial = {LatticeSet::interval(10, 8)};
    CHECK_THROWS_AS(anneal_search(zero, half), taublab::DomainError);
}

TEST_CASE("anneal is deterministic per seed and dominates its seeds") {
    SearchConfig c;
    c.window = IntBox({0}, {20});
    c.budget = 800;
    c.family_max = 6;
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        c.seed = seed;
        const auto a = anneal_search(c, Rational(1, 3));
        const auto b = anneal_search(c, Rational(1, 3));
        REQUIRE(a.value == b.value);
        REQUIRE(witness(a) == witness(b));
        REQUIRE(a.value >= family_search(Family::intervals, 6, Rational(1, 3)).value);
        REQUIRE(certify(a));
    }
    c.op = Operator::one_sided;
    const auto os = anneal_search(c, half);
    CHECK(certify(os, Operator::one_sided));
    CHECK(os.value <= Rational(2));
}

TEST_CASE("sweep envelope is monotone and certified") {
    SearchConfig c;
    c.strategy = Strategy::exhaustive;
    c.window = IntBox({0}, {7});
    const auto s = sweep(tenths(), c);
    REQUIRE(s.rows.size() == 9);
    for (std::size_t i = 0; i < s.rows.size(); ++i) {
        CHECK(certify(s.rows[i].estimate));
        CHECK(s.rows[i].estimate.value <= Rational(2) / s.rows[i].alpha - Rational(1));
        if (i > 0) CHECK(s.rows[i].estimate.value <= s.rows[i - 1].estimate.value);
    }
    SearchConfig mixed;
    mixed.strategy = Strategy::anneal;
    mixed.window = IntBox({0}, {15});
    mixed.budget = 300;
    mixed.seed = 9;
    const auto m = sweep(tenths(), mixed);
    for (std::size_t i = 1; i < m.rows.size(); ++i) CHECK(m.rows[i].estimate.value <= m.rows[i - 1].estimate.value);
    for (const auto& r : m.rows) CHECK(certify(r.estimate));
}

TEST_CASE("sweep errors") {
    SearchConfig c;
    CHECK_THROWS_AS(sweep({}, c), taublab::DomainError);
    CHECK_THROWS_AS(sweep({half, Rational(1, 4)}, c), taublab::DomainError);
    CHECK_THROWS_AS(sweep({half, half}, c), taublab::DomainError);
    CHECK_THROWS_AS(sweep({Rational(1)}, c), taublab::DomainError);
    c.dim = 2;
    c.window = IntBox({0}, {3});
    CHECK_THROWS_AS(sweep({half}, c), taublab::DomainError);
}

TEST_CASE("golden sweeps") {
    SearchConfig c;
    c.family_max = 60;
    const auto s = sweep(tenths(), c);
    CHECK(taublab::io::sweep_to_csv(s) == golden("sweep_interval_1d.csv"));
    for (const auto& r : s.rows) CHECK(r.estimate.value <= Rational(2) / r.alpha - Rational(1));

    c.op = Operator::one_sided;
    const auto o = sweep(tenths(), c);
    CHECK(taublab::io::sweep_to_csv(o) == golden("sweep_one_sided_1d.csv"));
    for (const auto& r : o.rows) {
        CHECK(r.estimate.value <= Rational(1) / r.alpha);
        CHECK(certify(r.estimate, Operator::one_sided));
    }

    SearchConfig ex;
    ex.strategy = Strategy::exhaustive;
    ex.window = IntBox({0}, {11});
    const auto single = sweep({half}, ex);
    CHECK(taublab::io::sweep_to_csv(single) == golden("sweep_single_point.csv"));
    CHECK(single.rows[0].estimate.value == exhaustive_search(IntBox({0}, {11}), half).value);

    SearchConfig an;
    an.strategy = Strategy::anneal;
    an.window = IntBox({0}, {63});
    an.seed = 42;
    CHECK(taublab::io::sweep_to_csv(sweep({half}, an)) == golden("sweep_anneal_1d.csv"));
}

TEST_CASE("sweeps are byte-identical across runs") {
    SearchConfig c;
    c.strategy = Strategy::anneal;
    c.window = IntBox({0}, {12});
    c.budget = 200;
    c.seed = 123;
    const auto grid = std::vector<Rational>{Rational(1, 3), half, Rational(2, 3)};
    CHECK(taublab::io::sweep_to_csv(sweep(grid, c)) == taublab::io::sweep_to_csv(sweep(grid, c)));
    CHECK(taublab::io::sweep_to_json(sweep(grid, c)).dump() == taublab::io::sweep_to_json(sweep(grid, c)).dump());
}

TEST_CASE("certify rejects tampered estimates") {
    auto e = taublab::lattice::interval_witness(10, half);
    CHECK(certify(e));
    e.value = e.value + Rational(1, 100);
    CHECK_FALSE(certify(e));
    auto f = taublab::lattice::interval_witness(10, half);
    f.halo_measure = Rational(1);
    CHECK_FALSE(certify(f));
    taublab::TauberianEstimate atoms{half, Rational(1), taublab::AtomSet{0}, Rational(1), Rational(1), "x",
                                     taublab::EstimateMode::exact};
    CHECK_THROWS_AS(certify(atoms), taublab::DomainError);
}

TEST_CASE("holder_modulus examples") {
    auto closed = [](const Rational& a) { return Rational(2) / a - Rational(1); };
    std::vector<CurvePoint> curve;
    for (const auto& a : {Rational(1, 4), half, Rational(3, 4)}) curve.push_back({a, closed(a)});
    const auto m = holder_modulus(curve, Rational(1));
    CHECK(m.max_quotient_exact == Rational(16));
    CHECK(m.argmax.first == Rational(1, 4));
    CHECK(m.argmax.second == half);
    CHECK(m.pairs == 3);
    CHECK(m.exploratory);
    CHECK_FALSE(m.disclaimer.empty());

    std::vector<CurvePoint> flat{{Rational(1, 4), Rational(3)}, {half, Rational(3)}, {Rational(3, 4), Rational(3)}};
    CHECK(holder_modulus(flat, Rational(1)).max_quotient_exact == Rational(0));
    CHECK(holder_modulus(flat, half).max_quotient == 0.0);

    const auto sq = holder_modulus(curve, half);
    CHECK_FALSE(sq.max_quotient_exact.has_value());
    CHECK(sq.max_quotient == doctest::Approx(8.0));  // 4 / (1/4)^(1/2)

    CHECK_THROWS_AS(holder_modulus({curve[0], curve[1]}, Rational(1)), taublab::DomainError);
    CHECK_THROWS_AS(holder_modulus(curve, Rational(0)), taublab::DomainError);
    CHECK_THROWS_AS(holder_modulus({curve[0], curve[0], curve[1]}, Rational(1)), taublab::DomainError);
}

TEST_CASE("holder quotient of the exact 1-D curve on [1/4, 3/4] stays below 32") {
    std::vector<CurvePoint> curve;
    for (std::int64_t i = 25; i <= 75; ++i) {
        const Rational a(i, 100);
        curve.push_back({a, Rational(2) / a - Rational(1)});
    }
    const auto m = holder_modulus(curve, Rational(1));
    CHECK(*m.max_quotient_exact <= Rational(32));
    CHECK(*m.max_quotient_exact == Rational(2) / (Rational(25, 100) * Rational(26, 100)));
}

TEST_CASE("solyanik_probe on the exact 1-D curve") {
    std::vector<CurvePoint> curve;
    for (std::int64_t i = 90; i <= 99; ++i) {
        const Rational a(i, 100);
        curve.push_back({a, Rational(2) / a - Rational(1)});
    }
    const auto r = solyanik_probe(curve);
    CHECK(r.points == 10);
    CHECK(r.slope == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r.intercept == doctest::Approx(std::log(2.0)).epsilon(1e-9));
    for (double res : r.residuals) CHECK(std::abs(res) < 1e-9);
    CHECK(r.exploratory);

    const std::vector<CurvePoint> few(curve.begin(), curve.begin() + 3);
    CHECK_THROWS_AS(solyanik_probe(few), taublab::DomainError);
    std::vector<CurvePoint> flat;
    for (const auto& c : curve) flat.push_back({c.alpha, Rational(1)});
    CHECK_THROWS_AS(solyanik_probe(flat), taublab::DomainError);
}

TEST_CASE("solyanik probe on a sweep near 1") {
    SearchConfig c;
    c.family_max = 200;
    std::vector<Rational> grid;
    for (std::int64_t i = 90; i <= 98; i += 2) grid.emplace_back(i, 100);
    const auto s = sweep(grid, c);
    const auto r = solyanik_probe(curve_of(s));
    CHECK(r.points == 5);
    CHECK(r.slope > 0.8);
    CHECK(r.slope < 1.2);
}

TEST_CASE("names round-trip") {
    for (auto s : {Strategy::exhaustive, Strategy::interval_family, Strategy::product_family,
                   Strategy::staircase_family, Strategy::box_family, Strategy::anneal}) {
        CHECK(parse_strategy(to_string(s)) == s);
    }
    CHECK(parse_operator("one-sided") == Operator::one_sided);
    CHECK_THROWS_AS(parse_strategy("greedy"), taublab::ParseError);
    CHECK_THROWS_AS(parse_operator("centered"), taublab::ParseError);
}
