#include "doctest.h"

#include "nfsieve/oracle.hpp"
#include "test_support.hpp"

using namespace nfsieve;
using nfsieve::testing::poly;

TEST_CASE("compute_sets worked example") {
    const SetFamily s = compute_sets(poly({1, 0, 1}, 4), 3, 1, 5);
    CHECK(s.rational_at(1) == 1);
    CHECK(s.rational_at(2) == 0);
    CHECK(s.simple_at(1) == 4);
    CHECK(s.simple_at(2) == 0);
    CHECK(s.multiple_at(1) == 0);
    CHECK(s.rational.size() == 1);  // cap from u(m+1) = 15
    CHECK(s.simple.size() == 2);    // cap from m(d+1)u^d = 108
}

TEST_CASE("compute_sets skips zero entries") {
    // f = x^2, m = 3, u = 2, b = 1: a = 0 has F = 0 and is skipped;
    // a = +-2 give F = 4 on the double root 0 mod 2.
    const SetFamily s = compute_sets(poly({0, 0, 1}, 3), 2, 1, 2);
    CHECK(s.multiple == std::vector<std::uint64_t>{2, 2, 0, 0, 0});
    CHECK(s.simple == std::vector<std::uint64_t>{0, 0, 0, 0, 0});
    // a - 3 over a in {-2, -1, 1, 2}: -5, -4, -2, -1
    CHECK(s.rational == std::vector<std::uint64_t>{2, 1, 0});
}

TEST_CASE("compute_sets rejects l | b") {
    CHECK_THROWS_AS(compute_sets(poly({1, 0, 1}, 4), 6, 4, 2), OracleMisuseError);
    CHECK_THROWS_AS(compute_sets(poly({1, 0, 1}, 4), 6, 7, 5), OracleMisuseError);
}

TEST_CASE("set sizes are monotone in e and rational sums match valuations") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 100; ++trial) {
        const unsigned d = 2 + trial % 4;
        const auto f = trial % 10 == 9 ? nfsieve::testing::squared_factor_poly(trial % 5, 1, d)
                                       : nfsieve::testing::random_poly(rng, d, 3 + trial % 20);
        const unsigned long u = 8 + trial % 13;
        const unsigned long b = 1 + rng() % u;
        const NormForm F = norm_form(f);
        for (Prime l : primes_up_to(17)) {
            if (b % l == 0) continue;
            const SetFamily s = compute_sets(f, u, b, l);
            for (unsigned e = 1; e + 1 <= s.rational.size(); ++e) CHECK(s.rational_at(e + 1) <= s.rational_at(e));
            for (unsigned e = 1; e + 1 <= s.simple.size(); ++e) {
                CHECK(s.simple_at(e + 1) <= s.simple_at(e));
                CHECK(s.multiple_at(e + 1) <= s.multiple_at(e));
            }

            std::uint64_t sum_sets = 0, sum_vals = 0, norm_sum_sets = 0, norm_sum_vals = 0;
            for (auto v : s.rational) sum_sets += v;
            for (unsigned e = 1; e <= s.simple.size(); ++e) norm_sum_sets += s.algebraic_at(e);
            const long su = static_cast<long>(u);
            for (long a = -su; a <= su; ++a) {
                if (std::gcd(a, static_cast<long>(b)) != 1) continue;
                const Integer r = Integer(a) - Integer(b) * f.m();
                const Integer n = eval_norm(F, a, b);
                if (r == 0 || n == 0) continue;
                sum_vals += valuation(r, l);
                norm_sum_vals += valuation(n, l);
            }
            CHECK(sum_sets == sum_vals);
            CHECK(norm_sum_sets == norm_sum_vals);
        }
    }
}

TEST_CASE("predict_exact") {
    const auto p = predict_exact(compute_sets(poly({1, 0, 1}, 4), 3, 1, 5));
    CHECK(p.c_exact == 10);
    CHECK(p.d_exact == 5);
    CHECK(p.correction == 0);

    SetFamily empty;
    empty.l = 3;
    empty.rational = {0, 0};
    empty.simple = {0, 0, 0};
    empty.multiple = {0, 0, 0};
    CHECK(predict_exact(empty) == ExactPrediction{0, 0, 0});

    SetFamily one = empty;
    one.multiple = {1, 0, 0};  // one multiple-root hit, valuation 1
    CHECK(predict_exact(one) == ExactPrediction{2, 1, 0});

    SetFamily lifted = empty;
    lifted.multiple = {1, 1, 1};  // one multiple-root hit with valuation 3
    // classical: while-loop 4 tests, plus the same 4 counted as #A_l + sum #A_{l^e}
    CHECK(predict_exact(lifted) == ExactPrediction{4, 3, 1});
}

TEST_CASE("predict_asymptotic") {
    SetFamily s;
    s.l = 5;
    s.rational = {1};
    s.simple = {4, 0};
    s.multiple = {0, 0};
    const auto p = predict_asymptotic(s);
    CHECK(p.c_asym == Rational(45, 4));
    CHECK(p.d_asym == Rational(25, 4));
    CHECK(p.c_asym.get_d() == doctest::Approx(11.25));
    CHECK(p.d_asym.get_d() == doctest::Approx(6.25));

    SetFamily empty;
    empty.l = 7;
    const auto z = predict_asymptotic(empty);
    CHECK(z.c_asym == 0);
    CHECK(z.d_asym == 0);

    for (Prime l : primes_up_to(200)) {
        SetFamily t;
        t.l = l;
        t.rational = {3};
        t.simple = {2};
        t.multiple = {0};
        const auto q = predict_asymptotic(t);
        CHECK(q.d_asym / q.c_asym == Rational(l, 2 * l - 1));
        if (l == 2) CHECK(3 * q.d_asym == 2 * q.c_asym);
        else CHECK(3 * q.d_asym < 2 * q.c_asym);
    }
}

TEST_CASE("verify_ledgers on the worked example") {
    const auto f = poly({1, 0, 1}, 4);
    const auto rep = verify_ledgers(sieve_classical(f, 3, 5), sieve_improved(f, 3, 5), f, 3, 5);
    CHECK(rep.ok());
    const LedgerRow* row15 = nullptr;
    for (const auto& r : rep.rows)
        if (r.sets.b == 1 && r.sets.l == 5) row15 = &r;
    REQUIRE(row15 != nullptr);
    CHECK(row15->classical.total() == 10);
    CHECK(row15->exact.c_exact == 10);
    CHECK(row15->improved.total() == 5);
    CHECK(row15->exact.d_exact == 5);
    CHECK(row15->exact.correction == 0);
    CHECK(rep.improved_total < rep.classical_total);
}

TEST_CASE("verify_ledgers with a liftable double root") {
    const auto f = poly({1, 2, 1}, 2);  // (x + 1)^2
    const unsigned long u = 30;
    const Prime y = 20;
    const auto rep = verify_ledgers(sieve_classical(f, u, y), sieve_improved(f, u, y), f, u, y);
    CHECK(rep.ok());
    CHECK(rep.correction_total > 0);
    bool saw_three = false;
    for (const auto& r : rep.rows) {
        if (r.sets.l == 3 && r.exact.correction > 0) saw_three = true;
        CHECK(r.improved.total() == r.exact.d_exact + r.exact.correction);
    }
    CHECK(saw_three);
    CHECK(rep.improved_total == rep.d_exact_total + rep.correction_total);
}

TEST_CASE("verify_ledgers names the cell of a tampered ledger") {
    const auto f = poly({1, 0, 1}, 4);
    SieveOutcome a3 = sieve_improved(f, 3, 5);
    a3.ledger.cell(2, 3).rational += 1;
    const auto rep = verify_ledgers(sieve_classical(f, 3, 5), a3, f, 3, 5);
    REQUIRE(rep.violations.size() == 1);
    CHECK(rep.violations[0].find("(b=2, l=3)") != std::string::npos);

    SieveOutcome a2 = sieve_classical(f, 3, 5);
    a2.ledger.cell(2, 2).rational = 1;  // l | b
    CHECK_FALSE(verify_ledgers(a2, sieve_improved(f, 3, 5), f, 3, 5).ok());

    CHECK_THROWS_AS(verify_ledgers(a3, a2, f, 3, 5), std::invalid_argument);
}

TEST_CASE("zero cells satisfy the identities at 0") {
    LedgerRow row;
    row.sets.l = 2;
    row.exact = predict_exact(row.sets);
    CHECK(row.classical_matches());
    CHECK(row.improved_matches());
    LedgerReport empty;
    CHECK(empty.ok());
    CHECK(empty.ratio() == 0.0);
}

TEST_CASE("identities, strict improvement and the asymptotic 2/3 bound on random instances") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 16; ++trial) {
        const unsigned d = 2 + trial % 4;
        const auto f = trial % 4 == 1 ? nfsieve::testing::squared_factor_poly(trial % 3, -1, d)
                                      : nfsieve::testing::random_poly(rng, d, 5 + 3 * trial);
        const unsigned long u = 25 + 4 * trial;
        const Prime y = 11 + 2 * trial;
        const auto rep = verify_ledgers(sieve_classical(f, u, y), sieve_improved(f, u, y), f, u, y);
        CHECK(rep.ok());
        for (const auto& v : rep.violations) MESSAGE(v);
        CHECK(rep.improved_total < rep.classical_total);
        CHECK(rep.classical_total == rep.c_exact_total);
        for (const auto& r : rep.rows) {
            CHECK(r.exact.c_exact >= r.exact.d_exact);
            CHECK(r.improved.total() <= r.classical.total());
            if (r.exact.correction == 0) CHECK(3 * r.asym.d_asym <= 2 * r.asym.c_asym);
        }
    }
}
