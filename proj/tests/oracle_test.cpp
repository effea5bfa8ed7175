#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <unordered_map>

#include "matchkern/oracle.hpp"

using namespace matchkern;

namespace {
const double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("group projection equals the spectral kernel at n = 2 within 1e-10") {
    for (double nu : {1.5, kInf}) {
        auto report = validate_spectral_identity(2, nu, 0.8, true);
        REQUIRE(!report.checks.empty());
        CHECK(report.checks[0].pass);
        CHECK(report.checks[0].deviation <= 1e-10);
    }
}

TEST_CASE("group projection equals the spectral kernel at n = 3 within 1e-8") {
    for (double nu : {2.5, kInf}) {
        auto report = validate_spectral_identity(3, nu, 1.0, true);
        for (const auto& check : report.checks) CHECK(check.pass);
    }
}

TEST_CASE("projected kernel has two distinct values at n = 2") {
    SpectralFilter filter(kInf, 1.0, true, 2);
    DenseMatrix k = group_kernel_projected(2, filter);
    REQUIRE(k.rows == 3);
    for (int i = 0; i < 3; ++i) CHECK(k.at(i, i) == doctest::Approx(1.0).epsilon(1e-12));
    double off = k.at(0, 1);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (i != j) CHECK(k.at(i, j) == doctest::Approx(off).epsilon(1e-12));
    CHECK(off < 1.0);
}

TEST_CASE("projection is idempotent") {
    // averaging an already coset-averaged kernel changes nothing:
    // S^T (S K S^T) S / |H|^2 = K, since S^T S = |H| I
    SpectralFilter filter(kInf, 1.0, true, 2);
    DenseMatrix k = group_kernel_projected(2, filter);
    int order = 24, classes = 3, coset = order / classes;
    auto xs = enumerate_matchings(2);
    Eigen::MatrixXd km(classes, classes);
    for (int i = 0; i < classes; ++i)
        for (int j = 0; j < classes; ++j) km(i, j) = k.at(i, j);
    Eigen::MatrixXd indicator = Eigen::MatrixXd::Zero(order, classes);
    for (int g = 0; g < order; ++g) indicator(g, g % classes) = 1.0;  // any coset labelling
    Eigen::MatrixXd lifted = indicator * km * indicator.transpose();
    Eigen::MatrixXd averaged =
        indicator.transpose() * lifted * indicator / (static_cast<double>(coset) * coset);
    CHECK((averaged - km).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("quotient spectrum matches the scaled exact eigenvalues for n <= 5") {
    CharacterTable chars;
    for (int n = 2; n <= 5; ++n) {
        auto result = quotient_spectrum_check(n, chars);
        CHECK(result.eigenvalues_match);
        CHECK(result.multiplicities_match);
        CHECK(result.max_relative_deviation <= 1e-8);
        CHECK(result.scale == doctest::Approx(2.0).epsilon(1e-10));
    }
}

TEST_CASE("sum of spherical dimensions equals the number of matchings, n <= 8") {
    CharacterTable chars;
    for (int n = 1; n <= 8; ++n) {
        Int total = 0;
        for (const auto& rho : enumerate_partitions(n)) total += chars.dimension(rho.doubled());
        CHECK(total == matching_count(n));
    }
}

TEST_CASE("full oracle suite passes at n = 2 and n = 3") {
    for (int n : {2, 3}) {
        auto report = run_oracle_suite(n, kInf, 1.0, true);
        for (const auto& check : report.checks) {
            INFO(check.name);
            CHECK(check.pass);
        }
    }
}

TEST_CASE("oracle guards") {
    SpectralFilter filter(kInf, 1.0, true, 4);
    CHECK_THROWS_AS(group_kernel_projected(4, filter), std::domain_error);
    CHECK_THROWS_AS(run_oracle_suite(7, kInf, 1.0, true), std::domain_error);
}

TEST_CASE("quotient Laplacian eigenvalue zero carries the constant eigenvector") {
    for (int n : {2, 3, 4}) {
        auto xs = enumerate_matchings(n);
        std::unordered_map<Matching, int> index;
        for (std::size_t i = 0; i < xs.size(); ++i)
            index.emplace(xs[i], static_cast<int>(i));
        int m = static_cast<int>(xs.size());
        Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(m, m);
        for (int i = 0; i < m; ++i) {
            auto nb = neighbors(xs[static_cast<std::size_t>(i)]);
            lap(i, i) = static_cast<double>(nb.size());
            for (const auto& y : nb) lap(i, index.at(y)) -= 1.0;
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap);
        CHECK(std::abs(solver.eigenvalues()(0)) <= 1e-10);
        Eigen::VectorXd ground = solver.eigenvectors().col(0);
        double first = ground(0);
        for (int i = 1; i < m; ++i) CHECK(ground(i) == doctest::Approx(first).epsilon(1e-10));
    }
}
