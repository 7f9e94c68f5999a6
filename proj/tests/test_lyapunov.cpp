#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "nablafc/lyapunov.hpp"

using namespace nablafc;

namespace {

std::mt19937_64 g_eng(99);

double urand(double lo = -2.0, double hi = 2.0) {
    return lo + (hi - lo) * (static_cast<double>(g_eng() >> 11) * 0x1.0p-53);
}

SampledSignal random_signal(GridIndex base, int len, bool nonneg = false) {
    std::vector<double> vals(len);
    for (auto& v : vals) v = nonneg ? std::fabs(urand()) : urand();
    const double pre = nonneg ? std::fabs(urand()) : urand();
    return SampledSignal::scalar(base, pre, vals);
}

}  // namespace

TEST_CASE("hand-evaluated even-power gap") {
    // x(-1)=1, x(0)=2, m=1, Caputo at k=0: nabla x^2(0) - 2 x(0) nabla x(0) = 3 - 4
    const auto s = SampledSignal::scalar(0, 1.0, {2.0});
    for (double alpha : {0.2, 0.5, 0.8}) {
        CHECK(inequality_gap(InequalityKind::even_power(1), Definition::Caputo, s, alpha, 0) == -1.0);
        CHECK(corollary_gap(Corollary::SquareM1, s, alpha, 0) == -1.0);
    }
}

TEST_CASE("constant signals sit on the Caputo equality case") {
    const auto s = SampledSignal::scalar(0, 1.3, {1.3, 1.3, 1.3});
    for (GridIndex k = 0; k <= 2; ++k) {
        CHECK(inequality_gap(InequalityKind::even_power(2), Definition::Caputo, s, 0.5, k) == 0.0);
        CHECK(inequality_gap(InequalityKind::power_chain(2, 3), Definition::Caputo, s, 0.5, k) == 0.0);
        CHECK(inequality_gap(InequalityKind::dyadic(2), Definition::Caputo, s, 0.5, k) == 0.0);
        CHECK(corollary_gap(Corollary::ChainN1, s, 0.5, k, 2) == 0.0);
    }
}

TEST_CASE("quadratic form with identity P on a 1-dim signal equals even power m=1") {
    const auto s = random_signal(0, 8);
    const auto quad = InequalityKind::quadratic_form({1.0}, 1);
    for (double alpha : {0.3, 0.7}) {
        for (GridIndex k = 0; k <= s.last(); ++k) {
            const double a = inequality_gap(quad, Definition::Caputo, s, alpha, k);
            const double b = inequality_gap(InequalityKind::even_power(1), Definition::Caputo, s, alpha, k);
            CHECK(a == Catch::Approx(b).margin(1e-13));
        }
    }
}

TEST_CASE("corollary collapses are exact parameter restrictions") {
    const auto sn = random_signal(0, 10, true);
    const auto s = random_signal(0, 10);
    for (GridIndex k = 0; k <= 9; ++k) {
        for (int m : {1, 2, 3}) {
            CHECK(corollary_gap(Corollary::ConjugateN1, sn, 0.6, k, m) ==
                  inequality_gap(InequalityKind::conjugate_power(m, 1), Definition::Caputo, sn, 0.6, k));
            CHECK(corollary_gap(Corollary::ChainN1, sn, 0.6, k, m) ==
                  inequality_gap(InequalityKind::power_chain(m, 1), Definition::Caputo, sn, 0.6, k));
        }
        CHECK(corollary_gap(Corollary::SquareM1, s, 0.6, k) ==
              inequality_gap(InequalityKind::even_power(1), Definition::Caputo, s, 0.6, k));
        // the conjugate variant at m=1 collapses onto the square rule
        CHECK(corollary_gap(Corollary::ConjugateN1, s, 0.6, k, 1) ==
              corollary_gap(Corollary::SquareM1, s, 0.6, k));
        // dyadic m=1 is the same inequality as even power m=1
        CHECK(inequality_gap(InequalityKind::dyadic(1), Definition::Caputo, s, 0.6, k) ==
              inequality_gap(InequalityKind::even_power(1), Definition::Caputo, s, 0.6, k));
    }
}

TEST_CASE("quadratic form decomposes through the SPD factor") {
    // gap with P = M^T M equals the sum of even-power gaps of z = M y
    const std::size_t kappa = 3;
    std::vector<double> A(kappa * kappa);
    for (auto& v : A) v = urand(-1.0, 1.0);
    std::vector<double> P(kappa * kappa, 0.0);
    for (std::size_t i = 0; i < kappa; ++i)
        for (std::size_t j = 0; j < kappa; ++j) {
            for (std::size_t t = 0; t < kappa; ++t) P[i * kappa + j] += A[t * kappa + i] * A[t * kappa + j];
            if (i == j) P[i * kappa + j] += 0.5;
        }
    const auto M = spd_factor(P, kappa);

    SampledSignal y(0, kappa);
    y.set_history({{urand(), urand(), urand()}});
    for (int i = 0; i < 10; ++i) y.append({urand(), urand(), urand()});

    SampledSignal z(0, kappa);
    auto mul = [&](GridIndex k) {
        std::vector<double> out(kappa, 0.0);
        for (std::size_t i = 0; i < kappa; ++i)
            for (std::size_t j = 0; j < kappa; ++j) out[i] += M[i * kappa + j] * y.at(k, j);
        return out;
    };
    z.set_history({mul(-1)});
    for (GridIndex k = 0; k <= y.last(); ++k) z.append(mul(k));

    const auto kind = InequalityKind::quadratic_form(P, kappa);
    for (double alpha : {0.25, 0.8}) {
        for (GridIndex k = 0; k <= y.last(); ++k) {
            const auto parts =
                inequality_gap_parts(kind, FractionalOperator::standard(Definition::Caputo, alpha), y, k);
            double sum = 0.0;
            for (std::size_t c = 0; c < kappa; ++c)
                sum += inequality_gap(InequalityKind::even_power(1), Definition::Caputo, z.component(c),
                                      alpha, k);
            CHECK(parts.gap == Catch::Approx(sum).margin(1e-10 * parts.scale()));
        }
    }
}

TEST_CASE("young inequality gap") {
    CHECK(young_gap(1.0, 1.0, 2.0, 2.0) == 0.0);
    CHECK(young_gap(2.0, 1.0, 2.0, 2.0) == Catch::Approx(0.5).margin(1e-15));
    CHECK(young_gap(0.0, 1.7, 2.0, 2.0) == Catch::Approx(1.7 * 1.7 / 2.0).margin(1e-15));
    CHECK_THROWS_AS(young_gap(1.0, 1.0, 2.0, 3.0), std::domain_error);
    CHECK_THROWS_AS(young_gap(-1.0, 1.0, 2.0, 2.0), std::domain_error);

    SECTION("nonnegativity and equality characterization") {
        for (int rep = 0; rep < 300; ++rep) {
            const double p = urand(1.2, 3.5);
            const double q = p / (p - 1.0);
            const double a = urand(0.1, 1.5);
            const double b = urand(0.1, 1.5);
            CHECK(young_gap(a, b, p, q) >= -1e-12);
            // constructed equality a^p = t = b^q
            const double t = urand(0.1, 2.0);
            CHECK(young_gap(std::pow(t, 1.0 / p), std::pow(t, 1.0 / q), p, q) <= 1e-12);
            // nearly equal powers give a tiny gap
            const double t2 = t + 1e-9 * urand(0.0, 1.0);
            CHECK(young_gap(std::pow(t, 1.0 / p), std::pow(t2, 1.0 / q), p, q) <= 1e-9);
            // well separated powers give a strictly positive gap
            const double s = std::pow(a, p);
            const double bq = s + urand(0.01, 1.0);
            CHECK(young_gap(a, std::pow(bq, 1.0 / q), p, q) > 1e-8);
        }
    }
}

TEST_CASE("spd factor") {
    CHECK(spd_factor({1.0}, 1) == std::vector<double>{1.0});
    const auto d = spd_factor({4.0, 0.0, 0.0, 9.0}, 2);
    CHECK(d[0] * d[0] + d[2] * d[2] == Catch::Approx(4.0));
    CHECK(d[1] * d[1] + d[3] * d[3] == Catch::Approx(9.0));

    SECTION("random 5x5 reconstruction") {
        const std::size_t n = 5;
        std::vector<double> A(n * n);
        for (auto& v : A) v = urand(-1.0, 1.0);
        std::vector<double> P(n * n, 0.0);
        double norm = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                for (std::size_t t = 0; t < n; ++t) P[i * n + j] += A[t * n + i] * A[t * n + j];
                if (i == j) P[i * n + j] += 1.0;
            }
        for (double v : P) norm = std::max(norm, std::fabs(v));
        const auto M = spd_factor(P, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                double rec = 0.0;
                for (std::size_t t = 0; t < n; ++t) rec += M[t * n + i] * M[t * n + j];
                CHECK(std::fabs(rec - P[i * n + j]) <= 1e-10 * norm);
            }
    }
    SECTION("rejections") {
        CHECK_THROWS_AS(spd_factor({1.0, 0.5, -0.5, 1.0}, 2), std::domain_error);        // asymmetric
        CHECK_THROWS_AS(spd_factor({1.0, 2.0, 2.0, 1.0}, 2), std::domain_error);         // indefinite
        CHECK_THROWS_AS(spd_factor({-1.0}, 1), std::domain_error);                       // negative
        CHECK_THROWS_AS(spd_factor({1.0, 0.0, 0.0}, 2), std::invalid_argument);          // bad size
    }
}

TEST_CASE("parameter validation") {
    const auto s = random_signal(0, 4, true);
    CHECK_THROWS_AS(inequality_gap(InequalityKind::conjugate_power(1, 2), Definition::Caputo, s, 0.5, 0),
                    std::domain_error);  // 2m = n pole
    CHECK_THROWS_AS(inequality_gap(InequalityKind::power_chain(1, 3), Definition::Caputo, s, 0.5, 0),
                    std::domain_error);  // 2m < n
    CHECK_THROWS_AS(inequality_gap(InequalityKind::even_power(0), Definition::Caputo, s, 0.5, 0),
                    std::domain_error);
    const auto v = SampledSignal::vector_valued(0, {1.0, 1.0}, {{1.0, 2.0}});
    CHECK_THROWS_AS(
        inequality_gap(InequalityKind::quadratic_form({1.0, 2.0, 2.0, 1.0}, 2), Definition::Caputo, v, 0.5, 0),
        std::domain_error);  // P not SPD
    CHECK_THROWS_AS(inequality_gap(InequalityKind::even_power(1), Definition::Caputo, v, 0.5, 0),
                    std::invalid_argument);  // scalar kind on a vector signal
}

TEST_CASE("power-chain x^0 convention at 2m = n") {
    // exponent-zero factor collapses the chain bound onto the operator itself
    const auto s = random_signal(0, 6);
    for (GridIndex k = 0; k <= s.last(); ++k)
        CHECK(inequality_gap(InequalityKind::power_chain(1, 2), Definition::GL, s, 0.5, k) ==
              Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("gaps stay nonpositive across definitions (smoke fuzz)") {
    for (int rep = 0; rep < 60; ++rep) {
        const double alpha = urand(0.05, 0.95);
        const auto def = std::array{Definition::GL, Definition::RL, Definition::Caputo}[rep % 3];
        const auto op = FractionalOperator::standard(def, alpha);
        const auto s = random_signal(rep % 4 - 2, 1 + rep % 14);
        const auto sn = random_signal(rep % 4 - 2, 1 + rep % 14, true);
        for (GridIndex k = s.base(); k <= s.last(); ++k) {
            for (int m : {1, 2, 3}) {
                auto p1 = inequality_gap_parts(InequalityKind::even_power(m), op, s, k);
                CHECK(p1.gap <= 1e-9 * p1.scale());
                auto p2 = inequality_gap_parts(InequalityKind::dyadic(m), op, s, k);
                CHECK(p2.gap <= 1e-9 * p2.scale());
            }
            // odd reduced numerator: nonnegative signal required
            auto p3 = inequality_gap_parts(InequalityKind::conjugate_power(3, 2), op, sn, k);
            CHECK(p3.gap <= 1e-9 * p3.scale());
            // even reduced numerator: signed signals admissible
            auto p4 = inequality_gap_parts(InequalityKind::conjugate_power(2, 3), op, s, k);
            CHECK(p4.gap <= 1e-9 * p4.scale());
            auto p5 = inequality_gap_parts(InequalityKind::power_chain(2, 3), op, s, k);
            CHECK(p5.gap <= 1e-9 * p5.scale());
        }
    }
}

TEST_CASE("gap report aggregates per instant") {
    const auto s = random_signal(0, 12);
    const auto rep =
        evaluate_gaps(InequalityKind::even_power(2), FractionalOperator::standard(Definition::Caputo, 0.5), s);
    CHECK(rep.gaps.size() == 12);
    CHECK(rep.violations == 0);
    double worst = -1e300;
    for (double g : rep.gaps) worst = std::max(worst, g);
    CHECK(rep.max_gap == worst);
    CHECK(rep.max_gap <= 0.0);
}
