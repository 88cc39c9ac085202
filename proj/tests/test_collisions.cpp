#include "catch_amalgamated.hpp"

#include "kplab/collisions.hpp"
#include "oracles.hpp"

using namespace kplab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

std::vector<MultiplierSymbol> builtins() {
    return {builtin_symbol("fkdv", 2.0), builtin_symbol("bo"), builtin_symbol("ilw"), builtin_symbol("whitham")};
}

std::function<double(double)> fn(const MultiplierSymbol& s) {
    return [s](double k) { return s(k); };
}

}  // namespace

TEST_CASE("omega examples") {
    CHECK(omega(builtin_symbol("fkdv", 2.0), SigmaSign(-1), 1.0, 1.0, {2, 0.0}) == -5.5);
    for (const auto& s : builtins()) CHECK(omega(s, SigmaSign(1), 1.3, 0.0, {1, 0.0}) == 0.0);
    CHECK_THAT(omega(builtin_symbol("ilw"), SigmaSign(1), 1.0, 0.1, {0, 0.25}), WithinAbs(0.033072, 2e-6));
    CHECK_THROWS_AS(omega(builtin_symbol("bo"), SigmaSign(1), 1.0, 0.1, {0, 0.0}), Error);
    CHECK_THROWS_AS(omega(builtin_symbol("bo"), SigmaSign(1), 1.0, 0.1, {1, 0.7}), Error);
}

TEST_CASE("krein signature examples") {
    CHECK(krein(builtin_symbol("whitham"), SigmaSign(-1), 1.0, 0.5, {2, 0.0}) == 1);
    CHECK(krein(builtin_symbol("fkdv", 2.0), SigmaSign(1), 1.0, 0.0, {2, 0.0}) == -1);
    CHECK(krein(builtin_symbol("bo"), SigmaSign(1), 1.0, 0.0, {1, 0.0}) == 0);
    CHECK(krein(builtin_symbol("bo"), SigmaSign(1), 1.0, 0.0, {-1, 0.0}) == 0);
}

TEST_CASE("periodic loci") {
    const auto f = builtin_symbol("fkdv", 2.0);
    CHECK_THAT(*collision_locus_periodic(f, SigmaSign(-1), 1.0, 1, 2), WithinAbs(4.0, 1e-14));
    CHECK_FALSE(collision_locus_periodic(f, SigmaSign(1), 1.0, 1, 2).has_value());
    CHECK(periodic_locus_value(f, SigmaSign(1), 1.0, 1, 2) == -4.0);
    CHECK_THAT(*collision_locus_periodic(builtin_symbol("whitham"), SigmaSign(1), 1.0, 1, 2), WithinAbs(0.237896, 1e-6));
    CHECK_THROWS_AS(collision_locus_periodic(f, SigmaSign(1), 1.0, 1, 1), Error);
    CHECK_THROWS_AS(collision_locus_periodic(f, SigmaSign(1), 1.0, 0, 2), Error);
}

TEST_CASE("Delta = 3 locus identity") {
    for (const auto& s : builtins())
        for (int sigma : {1, -1})
            for (double k : {0.5, 1.0, 2.0}) {
                const double v = periodic_locus_value(s, SigmaSign(sigma), k, 1, 2);
                CHECK_THAT(v, WithinAbs(4.0 * sigma / 3.0 * (s(k) - s(2 * k)), 1e-14));
            }
}

TEST_CASE("bloch loci") {
    CHECK_THAT(*collision_locus_bloch(builtin_symbol("ilw"), SigmaSign(1), 1.0, 0.25, 0, 1), WithinAbs(0.032293, 1e-6));
    CHECK(collision_locus_bloch(builtin_symbol("whitham"), SigmaSign(1), 1.0, 0.25, 1, 1).has_value());
    CHECK(collision_locus_bloch(builtin_symbol("fkdv", 2.0), SigmaSign(1), 1.0, 0.25, 0, 1).has_value());
    CHECK_THROWS_AS(collision_locus_bloch(builtin_symbol("bo"), SigmaSign(1), 1.0, 0.0, 0, 1), Error);
    CHECK_THROWS_AS(collision_locus_bloch(builtin_symbol("bo"), SigmaSign(1), 1.0, 0.25, 0, 0), Error);
}

TEST_CASE("closed forms match bisection roots") {
    for (const auto& s : builtins())
        for (int sigma : {1, -1})
            for (double k : {0.5, 1.0, 2.0}) {
                for (int p = 1; p <= 4; ++p)
                    for (int q = 1; q <= 4; ++q) {
                        if (p == 1 && q == 1) continue;
                        const auto f = collision_locus_periodic(s, SigmaSign(sigma), k, p, q);
                        const auto r = oracle::collision_root(fn(s), sigma, k, p, -q);
                        REQUIRE(f.has_value() == r.has_value());
                        if (f) CHECK(std::abs(*f - *r) <= 1e-12 * std::max(1.0, *r));
                    }
                for (double xi : {0.1, 0.25, 0.5})
                    for (int p = 0; p <= 4; ++p)
                        for (int q = 1; q <= 4; ++q) {
                            const auto f = collision_locus_bloch(s, SigmaSign(sigma), k, xi, p, q);
                            const auto r = oracle::collision_root(fn(s), sigma, k, p + xi, -q + xi);
                            REQUIRE(f.has_value() == r.has_value());
                            if (f) CHECK(std::abs(*f - *r) <= 1e-12 * std::max(1.0, *r));
                        }
            }
}

TEST_CASE("enumerated events are genuine collisions") {
    for (const auto& s : builtins())
        for (int sigma : {1, -1})
            for (double xi : {0.0, 0.25}) {
                const auto list = enumerate_collisions(s, SigmaSign(sigma), 1.0, xi, 6, 6.0);
                double prev = 0.0;
                for (const auto& e : list.events) {
                    const double ell = std::sqrt(e.ell_sq);
                    CHECK(std::abs(omega(s, SigmaSign(sigma), 1.0, ell, e.first) -
                                   omega(s, SigmaSign(sigma), 1.0, ell, e.second)) <= 1e-10);
                    CHECK(e.ell_sq > 0.0);
                    CHECK(e.ell_sq <= 36.0);
                    CHECK(e.ell_sq >= prev);
                    CHECK(e.dangerous == (e.kappa_first != e.kappa_second));
                    prev = e.ell_sq;
                }
                CHECK(list.max_index == 6);
            }
}

TEST_CASE("dangerous collision examples") {
    const auto f = builtin_symbol("fkdv", 2.0);
    const auto d = enumerate_dangerous(f, SigmaSign(-1), 1.0, 0.0, 3, 2.5);
    bool found = false;
    for (const auto& e : d.events)
        if (std::abs(e.ell_sq - 4.0) < 1e-12) {
            found = true;
            CHECK(e.dangerous);
            CHECK(std::abs(e.first.n - e.second.n) == 3);
        }
    CHECK(found);
    CHECK(enumerate_dangerous(f, SigmaSign(-1), 1.0, 0.0, 3, 1.9).events.empty());

    // (1, increasing): nothing dangerous at xi = 0
    for (const auto& s : {builtin_symbol("fkdv", 2.0), builtin_symbol("bo"), builtin_symbol("ilw")})
        CHECK(enumerate_dangerous(s, SigmaSign(1), 1.0, 0.0, 8, 10.0).events.empty());
    CHECK(enumerate_dangerous(builtin_symbol("whitham"), SigmaSign(-1), 1.0, 0.0, 8, 10.0).events.empty());

    // xi = 0.25 with (1, increasing): the {0,-1} pair is the only dangerous one
    const auto b = enumerate_dangerous(builtin_symbol("ilw"), SigmaSign(1), 1.0, 0.25, 8, 10.0);
    REQUIRE(b.events.size() == 1);
    CHECK(b.events[0].first.n == -1);
    CHECK(b.events[0].second.n == 0);
    CHECK_THAT(b.events[0].ell_sq, WithinAbs(0.032293, 1e-6));
}

TEST_CASE("no dangerous Delta = 1, 2 pairs at xi = 0") {
    for (const auto& s : builtins())
        for (int sigma : {1, -1}) {
            if (!short_wave_regime(SigmaSign(sigma), s.monotonicity())) continue;
            for (const auto& e : enumerate_dangerous(s, SigmaSign(sigma), 1.0, 0.0, 8, 100.0).events) {
                const int gap = std::abs(e.first.n - e.second.n);
                CHECK(gap >= 3);
            }
        }
}

TEST_CASE("first collision") {
    const auto fc = first_collision_ell_sq(builtin_symbol("ilw"), SigmaSign(1), 1.0, 0.25);
    REQUIRE(fc.has_value());
    CHECK(*fc > 0.0);
    CHECK(*fc <= 0.032293 + 1e-6);
}
