#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <limits>

#include "matchkern/kernel.hpp"

using namespace matchkern;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

KernelConfig heat_config(int n, double kappa) {
    KernelConfig cfg;
    cfg.n = n;
    cfg.nu = kInf;
    cfg.kappa = kappa;
    cfg.kappa_auto = false;
    return cfg;
}

double min_eigenvalue_ratio(const DenseMatrix& m) {
    Eigen::MatrixXd k(m.rows, m.cols);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) k(i, j) = m.at(i, j);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(k);
    double lo = solver.eigenvalues().minCoeff();
    double hi = solver.eigenvalues().maxCoeff();
    return lo / hi;
}

}  // namespace

TEST_CASE("filter values") {
    SpectralFilter heat(kInf, 1.0, true, 4);
    CHECK(heat.value(0.0) == 1.0);
    CHECK(heat.value(2.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));

    SpectralFilter matern(1.0, std::sqrt(2.0), false, 4);
    CHECK(matern.value(0.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(matern.value(1.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(matern.value(3.0) == doctest::Approx(0.25).epsilon(1e-14));

    SpectralFilter corrected(1.5, 1.0, true, 4);
    CHECK(corrected.exponent() == doctest::Approx(1.5 + 6.0));
    SpectralFilter uncorrected(1.5, 1.0, false, 4);
    CHECK(uncorrected.exponent() == doctest::Approx(1.5));
}

TEST_CASE("auto kappa satisfies its defining density ratio") {
    CharacterTable chars;
    for (int n : {2, 3, 5, 8, 15}) {
        for (double nu : {0.5, 2.5, kInf}) {
            for (bool dc : {false, true}) {
                double kappa = auto_kappa(nu, dc, n, chars);
                SpectralFilter filter(nu, kappa, dc, n);
                double lambda2 =
                    to_double(chars.laplacian_eigenvalue(Partition({n - 1, 1}).doubled()));
                double log_d2 = log_of(chars.dimension(Partition({n - 1, 1}).doubled()));
                // log of [Phi(0)^2 d_(2n)] / [Phi(lambda2)^2 d_2]
                double log_ratio =
                    2.0 * filter.log_value(0.0) - 2.0 * filter.log_value(lambda2) - log_d2;
                CHECK(std::abs(log_ratio - std::log(2.0)) < 1e-12);
            }
        }
    }
}

TEST_CASE("auto kappa closed form at n = 2") {
    CharacterTable chars;
    // lambda_{(2,2)} = 6 and d_{(2,2)} = 2 from the character machinery
    CHECK(to_double(chars.laplacian_eigenvalue(Partition({2, 2}))) == 6.0);
    CHECK(chars.dimension(Partition({2, 2})) == 2);
    double kappa = auto_kappa(kInf, true, 2, chars);
    CHECK(kappa * kappa == doctest::Approx(std::log(4.0) / 6.0).epsilon(1e-14));
}

TEST_CASE("heat auto kappa follows the closed form (decreasing in lambda2)") {
    CharacterTable chars;
    for (int n = 2; n <= 10; ++n) {
        double lambda2 = to_double(chars.laplacian_eigenvalue(Partition({n - 1, 1}).doubled()));
        double log_d2 = log_of(chars.dimension(Partition({n - 1, 1}).doubled()));
        double kappa = auto_kappa(kInf, true, n, chars);
        CHECK(kappa * kappa ==
              doctest::Approx((std::log(2.0) + log_d2) / lambda2).epsilon(1e-13));
    }
}

TEST_CASE("spectral terms") {
    KernelConfig cfg = heat_config(6, 1.0);
    cfg.truncation = {Partition({6})};
    MatchingKernel kernel(cfg);
    REQUIRE(kernel.terms().size() == 1);
    CHECK(kernel.terms()[0].eigenvalue == 0);
    CHECK(kernel.terms()[0].dim == 1);

    KernelConfig full = heat_config(6, 1.0);
    MatchingKernel k2(full);
    for (const auto& term : k2.terms()) CHECK(term.weight >= 0.0);

    KernelConfig big;
    big.n = 15;
    MatchingKernel k3(big);
    REQUIRE(k3.terms().size() == 30);
    bool has_top = false, has_second = false;
    for (const auto& term : k3.terms()) {
        if (term.rho == Partition({15})) has_top = true;
        if (term.rho == Partition({14, 1})) has_second = true;
    }
    CHECK(has_top);
    CHECK(has_second);
}

TEST_CASE("kernel value basics") {
    KernelConfig cfg = heat_config(5, 0.8);
    MatchingKernel kernel(cfg);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Matching x = random_matching(5, seed);
        Matching y = random_matching(5, seed + 100);
        CHECK(kernel.value(x, x) == 1.0);
        CHECK(kernel.value(x, y) == kernel.value(y, x));
        Permutation sigma = random_permutation(10, seed);
        CHECK(kernel.value(act(sigma, x), act(sigma, y)) ==
              doctest::Approx(kernel.value(x, y)).epsilon(1e-15));
    }
}

TEST_CASE("kernel is stationary on every pair, n = 4 exhaustive") {
    KernelConfig cfg = heat_config(4, 0.7);
    MatchingKernel kernel(cfg);
    auto xs = enumerate_matchings(4);
    Permutation sigma = random_permutation(8, 42);
    for (const auto& x : xs)
        for (const auto& y : xs)
            CHECK(kernel.value(act(sigma, x), act(sigma, y)) ==
                  doctest::Approx(kernel.value(x, y)).epsilon(1e-14));
}

TEST_CASE("kernel matrix basics") {
    KernelConfig cfg = heat_config(4, 0.7);
    MatchingKernel kernel(cfg);

    std::vector<Matching> one{random_matching(4, 3)};
    DenseMatrix m1 = kernel.matrix(one);
    CHECK(m1.rows == 1);
    CHECK(m1.at(0, 0) == 1.0);

    std::vector<Matching> dup{one[0], one[0]};
    DenseMatrix m2 = kernel.matrix(dup);
    for (double v : m2.data) CHECK(v == 1.0);
}

TEST_CASE("parallel and serial kernel matrices are bit-identical") {
    KernelConfig cfg;
    cfg.n = 8;
    cfg.nu = 2.5;
    std::vector<Matching> xs;
    for (std::uint64_t seed = 0; seed < 40; ++seed) xs.push_back(random_matching(8, seed));
    MatchingKernel kernel(cfg);
    DenseMatrix parallel = kernel.matrix(xs);
    DenseMatrix serial = kernel.matrix_serial(xs);
    REQUIRE(parallel.data.size() == serial.data.size());
    for (std::size_t i = 0; i < parallel.data.size(); ++i)
        CHECK(parallel.data[i] == serial.data[i]);
}

TEST_CASE("Gram matrices are positive semi-definite") {
    for (double nu : {2.5, kInf}) {
        KernelConfig cfg;
        cfg.n = 10;
        cfg.nu = nu;
        MatchingKernel kernel(cfg);
        std::vector<Matching> xs;
        for (std::uint64_t seed = 0; seed < 100; ++seed) xs.push_back(random_matching(10, seed));
        DenseMatrix gram = kernel.matrix(xs);
        CHECK(min_eigenvalue_ratio(gram) >= -1e-8);
    }
}

TEST_CASE("truncated kernels stay positive semi-definite for any truncation") {
    auto xs = enumerate_matchings(4);
    for (int size : {1, 2, 3, 5}) {
        KernelConfig cfg = heat_config(4, 0.6);
        cfg.truncation_size = size;
        MatchingKernel kernel(cfg);
        DenseMatrix gram = kernel.matrix(xs);
        CHECK(min_eigenvalue_ratio(gram) >= -1e-8);
    }
}

TEST_CASE("approximation error formula against brute force over X_4") {
    // independent oracle: direct L2 norms of the truncated kernel over all
    // pairs of matchings, using zonal function tables
    CharacterTable chars;
    ZsfProvider provider(ZsfBackendKind::ZonalPolynomial);
    int n = 4;
    auto xs = enumerate_matchings(n);
    auto all = enumerate_partitions(n);
    double kappa = 0.5;
    SpectralFilter filter(kInf, kappa, true, n);
    double log_order = log_of(factorial(2 * n));
    std::vector<double> weight;
    std::vector<std::map<Partition, Rat>> tables;
    for (const auto& rho : all) {
        weight.push_back(
            std::exp(filter.log_value(to_double(chars.laplacian_eigenvalue(rho.doubled()))) +
                     log_of(chars.dimension(rho.doubled())) - log_order));
        tables.push_back(provider.table(rho));
    }
    for (int keep = 1; keep <= static_cast<int>(all.size()); ++keep) {
        auto truncation = select_truncation(n, keep);
        double dropped = 0.0, total = 0.0;
        for (const auto& x : xs) {
            for (const auto& y : xs) {
                Partition mu = generalized_distance(x, y);
                double full = 0.0, kept = 0.0;
                for (std::size_t i = 0; i < all.size(); ++i) {
                    double term = weight[i] * to_double(tables[i].at(mu));
                    full += term;
                    if (std::find(truncation.begin(), truncation.end(), all[i]) !=
                        truncation.end())
                        kept += term;
                }
                dropped += (full - kept) * (full - kept);
                total += full * full;
            }
        }
        double brute = std::sqrt(dropped / total);
        double formula = approximation_error(n, kInf, kappa, true, truncation, chars);
        CHECK(formula == doctest::Approx(brute).epsilon(1e-10));
    }
}

TEST_CASE("approximation error endpoints and monotonicity") {
    CharacterTable chars;
    CHECK(approximation_error(6, kInf, 0.5, true, enumerate_partitions(6), chars) == 0.0);
    CHECK(approximation_error(6, kInf, 0.5, true, {}, chars) == 1.0);
    double prev = 1.0;
    for (int size = 1; size <= 11; ++size) {
        double err =
            approximation_error(6, kInf, 0.5, true, select_truncation(6, size), chars);
        CHECK(err <= prev + 1e-15);
        prev = err;
    }
}

TEST_CASE("heat kernel limits in kappa at n = 5") {
    std::vector<Matching> xs;
    for (std::uint64_t seed = 0; seed < 12; ++seed) xs.push_back(random_matching(5, seed));
    KernelConfig tight = heat_config(5, 0.05);
    tight.truncation_size = 7;  // p(5), untruncated
    KernelConfig wide = heat_config(5, 25.0);
    wide.truncation_size = 7;
    MatchingKernel delta_like(tight), constant_like(wide);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        for (std::size_t j = i + 1; j < xs.size(); ++j) {
            if (xs[i] == xs[j]) continue;
            CHECK(delta_like.value(xs[i], xs[j]) < 0.05);
            CHECK(constant_like.value(xs[i], xs[j]) > 0.95);
        }
    }
}

TEST_CASE("spectral density report") {
    CharacterTable chars;
    auto rows = spectral_density_report(15, 2.5, auto_kappa(2.5, true, 15, chars), true, chars);
    CHECK(rows.size() == enumerate_partitions(15).size());
    const DensityRow* zero_row = nullptr;
    for (const auto& row : rows)
        if (row.rho == Partition({15})) zero_row = &row;
    REQUIRE(zero_row != nullptr);
    CHECK(zero_row->lambda == 0.0);

    // with correction on, the density peak sits at a smaller eigenvalue
    auto argmax_lambda = [](const std::vector<DensityRow>& rs) {
        double best = rs.front().log_density, lambda = rs.front().lambda;
        for (const auto& r : rs)
            if (r.log_density > best) {
                best = r.log_density;
                lambda = r.lambda;
            }
        return lambda;
    };
    auto off = spectral_density_report(15, 2.5, auto_kappa(2.5, false, 15, chars), false, chars);
    CHECK(argmax_lambda(rows) < argmax_lambda(off));
}

TEST_CASE("config validation") {
    KernelConfig cfg = heat_config(3, 1.0);
    cfg.truncation = {Partition({2})};  // wrong degree
    CHECK_THROWS_AS(MatchingKernel{cfg}, std::invalid_argument);
    CHECK_THROWS_AS(SpectralFilter(0.0, 1.0, true, 3), std::invalid_argument);
    CHECK_THROWS_AS(SpectralFilter(1.0, 0.0, true, 3), std::invalid_argument);
}

TEST_CASE("stationarity over all distance classes, n = 5 and 6 exhaustive") {
    // every pair class is hit: enumerate spheres around x0 and around a
    // relabeled base point, values must line up classwise
    for (int n : {5, 6}) {
        KernelConfig cfg = heat_config(n, 0.6);
        MatchingKernel kernel(cfg);
        Matching x0 = base_point(n);
        Permutation sigma = random_permutation(2 * n, 99);
        for (const auto& x : enumerate_matchings(n))
            CHECK(kernel.value(act(sigma, x), act(sigma, x0)) ==
                  doctest::Approx(kernel.value(x, x0)).epsilon(1e-14));
    }
}

TEST_CASE("stationarity under random relabelings up to n = 12") {
    for (int n = 7; n <= 12; ++n) {
        KernelConfig cfg;
        cfg.n = n;
        cfg.nu = 2.5;
        MatchingKernel kernel(cfg);
        for (std::uint64_t seed = 0; seed < 25; ++seed) {
            Matching x = random_matching(n, 31 * seed);
            Matching y = random_matching(n, 31 * seed + 17);
            Permutation sigma = random_permutation(2 * n, seed);
            CHECK(std::abs(kernel.value(act(sigma, x), act(sigma, y)) - kernel.value(x, y)) <=
                  1e-12);
        }
    }
}

TEST_CASE("uncorrected Matern stays a valid kernel") {
    KernelConfig cfg;
    cfg.n = 8;
    cfg.nu = 2.5;
    cfg.degree_correction = false;
    MatchingKernel kernel(cfg);
    std::vector<Matching> xs;
    for (std::uint64_t seed = 0; seed < 60; ++seed) xs.push_back(random_matching(8, seed));
    DenseMatrix gram = kernel.matrix(xs);
    for (int i = 0; i < gram.rows; ++i) CHECK(gram.at(i, i) == 1.0);
    CHECK(min_eigenvalue_ratio(gram) >= -1e-8);
}
