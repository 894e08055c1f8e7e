#include "doctest.h"

#include <cmath>

#include "rcw/scaling.hpp"

using namespace rcw;

namespace {
const double kE = std::exp(1.0);
const double kBetaGasket = std::log(5.0) / std::log(2.0);
}

TEST_CASE("params validation") {
    CHECK_NOTHROW((ScalingParams{2.0, 2.0, 0.5, 1.0, 1.0}).validate());
    CHECK_THROWS_AS((ScalingParams{0.5, 2.0}).validate(), validation_error);
    CHECK_THROWS_AS((ScalingParams{2.0, 1.0}).validate(), validation_error);
    CHECK_THROWS_AS((ScalingParams{2.0, 2.0, 1.5}).validate(),
                    validation_error);  // epsilon + 1 >= beta
    CHECK_THROWS_AS((ScalingParams{2.0, 2.0, 0.0, 0.0}).validate(),
                    validation_error);
}

TEST_CASE("catalog exponents") {
    const auto z2 = catalog_params(GraphKind::lattice_box, 2);
    CHECK(z2.alpha == 2.0);
    CHECK(z2.beta == 2.0);
    const auto z1 = catalog_params(GraphKind::lattice_box, 1);
    CHECK(z1.alpha == 1.0);
    const auto gk = catalog_params(GraphKind::gasket_level, 2);
    CHECK(gk.alpha == doctest::Approx(std::log(3.0) / std::log(2.0)).epsilon(1e-15));
    CHECK(gk.beta == doctest::Approx(kBetaGasket).epsilon(1e-15));
}

TEST_CASE("phi") {
    // log log e^e = 1
    CHECK(phi(std::exp(kE), 2.0) == doctest::Approx(std::exp(kE / 2.0)).epsilon(1e-14));
    // beta = 2 reduces to sqrt(q log log q)
    for (double q : {20.0, 1e3, 1e8}) {
        CHECK(phi(q, 2.0) ==
              doctest::Approx(std::sqrt(q * std::log(std::log(q)))).epsilon(1e-14));
    }
    // q = e^{e^2}: log log q = 2
    const double q = std::exp(kE * kE);
    CHECK(phi(q, kBetaGasket) ==
          doctest::Approx(std::pow(q, 1.0 / kBetaGasket) *
                          std::pow(2.0, 1.0 - 1.0 / kBetaGasket))
              .epsilon(1e-13));
    CHECK_THROWS_AS(phi(kE, 2.0), validation_error);
    CHECK_THROWS_AS(phi(1.0, 2.0), validation_error);
}

TEST_CASE("psi") {
    CHECK(psi(std::exp(kE), 2.0) == doctest::Approx(std::exp(kE / 2.0)).epsilon(1e-14));
    const double n = std::exp(kE * kE);
    CHECK(psi(n, 2.0) ==
          doctest::Approx(std::exp(kE * kE / 2.0) / std::sqrt(2.0)).epsilon(1e-13));
    // psi * log log n = phi at beta = 2
    for (double x : {16.0, 1e5, 1e12}) {
        CHECK(psi(x, 2.0) * std::log(std::log(x)) ==
              doctest::Approx(phi(x, 2.0)).epsilon(1e-13));
    }
    CHECK_THROWS_AS(psi(2.0, 2.0), validation_error);
}

TEST_CASE("sequence table identities") {
    for (double beta : {2.0, kBetaGasket}) {
        ScalingParams params{2.0, beta, 0.0, 1.0, 1.0};
        const auto t = sequence_table(10, params);
        REQUIRE(t.k.size() == 10);
        CHECK(t.sigma[0] == 0.0);
        double running = 0.0;
        for (std::size_t i = 0; i < t.k.size(); ++i) {
            const double k = static_cast<double>(t.k[i]);
            CHECK(std::pow(t.a[i], beta) ==
                  doctest::Approx(std::exp(k * k)).epsilon(1e-12));
            CHECK(std::pow(t.b[i], beta) ==
                  doctest::Approx(std::exp(k)).epsilon(1e-12));
            CHECK(t.lambda[i] ==
                  doctest::Approx(std::log(std::pow(1.0 + k, 2.0 / 3.0)))
                      .epsilon(1e-12));
            CHECK(t.lambda[i] > 0.0);
            CHECK(t.u[i] ==
                  doctest::Approx(t.lambda[i] * std::exp(k * k)).epsilon(1e-12));
            CHECK(t.sigma[i] == doctest::Approx(running).epsilon(1e-12));
            running += t.u[i];
        }
        // direct spot values
        CHECK(t.a[0] == doctest::Approx(std::exp(1.0 / beta)).epsilon(1e-14));
        CHECK(t.a[1] == doctest::Approx(std::exp(4.0 / beta)).epsilon(1e-14));
    }
    // lambda_1 = (2/3) log 2 at c5 = c6 = 1
    const auto t = sequence_table(1, ScalingParams{});
    CHECK(t.lambda[0] == doctest::Approx(2.0 / 3.0 * std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("sequence table rejects nonpositive lambda") {
    // c5 (1+k)^{2/3} <= 1 at k = 1 when c5 is tiny
    ScalingParams params{2.0, 2.0, 0.0, 0.1, 1.0};
    CHECK_THROWS_AS(sequence_table(3, params), validation_error);
    CHECK_THROWS_AS(sequence_table(0, ScalingParams{}), validation_error);
}
