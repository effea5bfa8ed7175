#include "matchkern/oracle.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace matchkern {

bool OracleReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const OracleCheck& c) { return c.pass; });
}

namespace {

std::vector<Permutation> all_permutations(int m) {
    std::vector<int> img(static_cast<std::size_t>(m));
    std::iota(img.begin(), img.end(), 1);
    std::vector<Permutation> out;
    do {
        out.push_back(Permutation(img));
    } while (std::next_permutation(img.begin(), img.end()));
    return out;
}

struct VecHash {
    std::size_t operator()(const std::vector<int>& v) const {
        std::size_t h = 0xcbf29ce484222325ull;
        for (int x : v) h = h * 0x100000001b3ull ^ static_cast<std::size_t>(x);
        return h;
    }
};

Eigen::MatrixXd diagonal_normalized(const Eigen::MatrixXd& k) {
    Eigen::VectorXd d = k.diagonal().array().sqrt().inverse();
    return d.asDiagonal() * k * d.asDiagonal();
}

DenseMatrix to_dense(const Eigen::MatrixXd& m) {
    DenseMatrix out(static_cast<int>(m.rows()), static_cast<int>(m.cols()));
    for (int i = 0; i < out.rows; ++i)
        for (int j = 0; j < out.cols; ++j) out.at(i, j) = m(i, j);
    return out;
}

Eigen::MatrixXd quotient_laplacian(int n, std::vector<Matching>* matchings_out) {
    auto xs = enumerate_matchings(n);
    std::unordered_map<Matching, int> index;
    for (std::size_t i = 0; i < xs.size(); ++i) index.emplace(xs[i], static_cast<int>(i));
    int m = static_cast<int>(xs.size());
    Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
        auto nb = neighbors(xs[static_cast<std::size_t>(i)]);
        lap(i, i) = static_cast<double>(nb.size());
        for (const auto& y : nb) lap(i, index.at(y)) -= 1.0;
    }
    if (matchings_out) *matchings_out = std::move(xs);
    return lap;
}

}  // namespace

DenseMatrix group_kernel_projected(int n, const SpectralFilter& filter) {
    if (n > 3) throw std::domain_error("group-kernel oracle limited to n <= 3");
    int m2 = 2 * n;
    auto perms = all_permutations(m2);
    int order = static_cast<int>(perms.size());
    std::unordered_map<std::vector<int>, int, VecHash> perm_index;
    for (int i = 0; i < order; ++i) {
        std::vector<int> img;
        for (int v = 1; v <= m2; ++v) img.push_back(perms[static_cast<std::size_t>(i)].image(v));
        perm_index.emplace(std::move(img), i);
    }

    // Cayley graph over all transpositions, edges (g, tau g).
    std::vector<Permutation> transpositions;
    for (int a = 1; a <= m2; ++a) {
        for (int b = a + 1; b <= m2; ++b) {
            std::vector<int> img(static_cast<std::size_t>(m2));
            std::iota(img.begin(), img.end(), 1);
            std::swap(img[static_cast<std::size_t>(a - 1)], img[static_cast<std::size_t>(b - 1)]);
            transpositions.push_back(Permutation(std::move(img)));
        }
    }
    Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(order, order);
    for (int i = 0; i < order; ++i) {
        lap(i, i) = static_cast<double>(transpositions.size());
        for (const auto& tau : transpositions) {
            Permutation h = tau.compose(perms[static_cast<std::size_t>(i)]);
            std::vector<int> img;
            for (int v = 1; v <= m2; ++v) img.push_back(h.image(v));
            lap(i, perm_index.at(img)) -= 1.0;
        }
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap);
    Eigen::VectorXd phi(order);
    for (int i = 0; i < order; ++i)
        phi(i) = filter.value(std::max(0.0, solver.eigenvalues()(i)));
    Eigen::MatrixXd group_kernel =
        solver.eigenvectors() * phi.asDiagonal() * solver.eigenvectors().transpose();

    // Average over cosets: K_proj = S^T K S / |H|^2.
    auto xs = enumerate_matchings(n);
    std::unordered_map<Matching, int> matching_index;
    for (std::size_t i = 0; i < xs.size(); ++i) matching_index.emplace(xs[i], static_cast<int>(i));
    int classes = static_cast<int>(xs.size());
    Matching x0 = base_point(n);
    Eigen::MatrixXd indicator = Eigen::MatrixXd::Zero(order, classes);
    for (int i = 0; i < order; ++i)
        indicator(i, matching_index.at(act(perms[static_cast<std::size_t>(i)], x0))) = 1.0;
    double coset_size = static_cast<double>(order) / classes;  // |H|
    Eigen::MatrixXd projected =
        indicator.transpose() * group_kernel * indicator / (coset_size * coset_size);
    return to_dense(diagonal_normalized(projected));
}

DenseMatrix quotient_graph_kernel(int n, const SpectralFilter& filter, double lambda_scale) {
    if (n > 6) throw std::domain_error("quotient-graph oracle limited to n <= 6");
    Eigen::MatrixXd lap = quotient_laplacian(n, nullptr);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap);
    int m = static_cast<int>(lap.rows());
    Eigen::VectorXd phi(m);
    for (int i = 0; i < m; ++i)
        phi(i) = filter.value(std::max(0.0, lambda_scale * solver.eigenvalues()(i)));
    Eigen::MatrixXd kernel =
        solver.eigenvectors() * phi.asDiagonal() * solver.eigenvectors().transpose();
    return to_dense(diagonal_normalized(kernel));
}

QuotientSpectrumResult quotient_spectrum_check(int n, const CharacterTable& chars) {
    if (n > 6) throw std::domain_error("quotient-graph oracle limited to n <= 6");
    Eigen::MatrixXd lap = quotient_laplacian(n, nullptr);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap);
    const auto& eig = solver.eigenvalues();

    // Exact reference spectrum with multiplicities d_{2 rho}.
    std::map<double, long> expected;  // lambda -> multiplicity
    double min_nonzero_exact = 0.0;
    for (const auto& rho : enumerate_partitions(n)) {
        double lambda = to_double(chars.laplacian_eigenvalue(rho.doubled()));
        long dim = chars.dimension(rho.doubled()).get_si();
        expected[lambda] += dim;
        if (lambda > 0 && (min_nonzero_exact == 0.0 || lambda < min_nonzero_exact))
            min_nonzero_exact = lambda;
    }

    double min_nonzero_quotient = 0.0;
    for (int i = 0; i < eig.size(); ++i) {
        if (eig(i) > 1e-6) {
            min_nonzero_quotient = eig(i);
            break;
        }
    }
    QuotientSpectrumResult result;
    result.scale = min_nonzero_exact / min_nonzero_quotient;

    // Cluster the numeric spectrum and compare against the scaled reference.
    std::map<double, long> observed;
    double tol = 1e-8 * std::abs(eig(eig.size() - 1)) * result.scale + 1e-10;
    for (int i = 0; i < eig.size(); ++i) {
        double scaled = std::max(0.0, eig(i)) * result.scale;
        bool found = false;
        for (auto& [lambda, count] : observed) {
            if (std::abs(lambda - scaled) <= tol) {
                ++count;
                found = true;
                break;
            }
        }
        if (!found) observed[scaled] += 1;
    }
    result.eigenvalues_match = observed.size() == expected.size();
    result.multiplicities_match = true;
    if (result.eigenvalues_match) {
        auto it_obs = observed.begin();
        for (auto it_exp = expected.begin(); it_exp != expected.end(); ++it_exp, ++it_obs) {
            double dev = std::abs(it_obs->first - it_exp->first) /
                         std::max(1.0, std::abs(it_exp->first));
            result.max_relative_deviation = std::max(result.max_relative_deviation, dev);
            if (dev > 1e-8) result.eigenvalues_match = false;
            if (it_obs->second != it_exp->second) result.multiplicities_match = false;
        }
    } else {
        result.multiplicities_match = false;
    }
    return result;
}

namespace {

DenseMatrix zsf_kernel_matrix(int n, double nu, double kappa, bool degree_correction,
                              const std::vector<Matching>& xs) {
    KernelConfig cfg;
    cfg.n = n;
    cfg.nu = nu;
    cfg.kappa = kappa;
    cfg.kappa_auto = false;
    cfg.truncation = enumerate_partitions(n);  // untruncated
    cfg.degree_correction = degree_correction;
    cfg.backend = ZsfBackendKind::ZonalPolynomial;
    MatchingKernel kernel(cfg);
    return kernel.matrix_serial(xs);
}

double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
    double out = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i)
        out = std::max(out, std::abs(a.data[i] - b.data[i]));
    return out;
}

}  // namespace

OracleReport validate_spectral_identity(int n, double nu, double kappa, bool degree_correction) {
    if (n > 3) throw std::domain_error("spectral-identity oracle limited to n <= 3");
    OracleReport report;
    SpectralFilter filter(nu, kappa, degree_correction, n);
    auto xs = enumerate_matchings(n);
    DenseMatrix brute = group_kernel_projected(n, filter);
    DenseMatrix spectral = zsf_kernel_matrix(n, nu, kappa, degree_correction, xs);
    double dev = max_abs_diff(brute, spectral);
    report.checks.push_back({"group-projection vs spectral kernel", dev <= 1e-8, dev,
                             "max abs entry difference after diagonal normalization"});

    // Bi-invariance: projected entries must depend only on d(x, y).
    std::map<Partition, double> class_value;
    double bi_dev = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        for (std::size_t j = 0; j < xs.size(); ++j) {
            Partition mu = generalized_distance(xs[i], xs[j]);
            double v = brute.at(static_cast<int>(i), static_cast<int>(j));
            auto [it, inserted] = class_value.emplace(mu, v);
            if (!inserted) bi_dev = std::max(bi_dev, std::abs(it->second - v));
        }
    }
    report.checks.push_back({"projected kernel depends only on generalized distance",
                             bi_dev <= 1e-10, bi_dev, "max spread within a distance class"});
    return report;
}

OracleReport run_oracle_suite(int n, double nu, double kappa, bool degree_correction) {
    if (n > 6) throw std::domain_error("oracle suite limited to n <= 6");
    OracleReport report;
    CharacterTable chars;

    // Quotient graph regularity.
    auto xs = enumerate_matchings(n);
    bool regular = true;
    for (const auto& x : xs)
        if (static_cast<int>(neighbors(x).size()) != n * (n - 1)) regular = false;
    report.checks.push_back({"quotient graph is n(n-1)-regular", regular,
                             0.0, "degree " + std::to_string(n * (n - 1))});

    auto spectrum = quotient_spectrum_check(n, chars);
    report.checks.push_back({"quotient spectrum matches scaled lambda_{2 rho}",
                             spectrum.eigenvalues_match, spectrum.max_relative_deviation,
                             "fitted scale " + std::to_string(spectrum.scale)});
    report.checks.push_back({"eigenvalue multiplicities equal d_{2 rho}",
                             spectrum.multiplicities_match, 0.0,
                             "sum of d_{2 rho} equals |X_n|"});

    SpectralFilter filter(nu, kappa, degree_correction, n);
    DenseMatrix quotient = quotient_graph_kernel(n, filter, spectrum.scale);
    DenseMatrix spectral = zsf_kernel_matrix(n, nu, kappa, degree_correction, xs);
    double dev_q = 0.0;
    for (std::size_t i = 0; i < quotient.data.size(); ++i)
        dev_q = std::max(dev_q, std::abs(quotient.data[i] - spectral.data[i]));
    report.checks.push_back({"quotient-graph kernel vs spectral kernel", dev_q <= 1e-8, dev_q,
                             "filter applied to rescaled quotient eigenvalues"});

    if (n <= 3) {
        auto identity = validate_spectral_identity(n, nu, kappa, degree_correction);
        report.checks.insert(report.checks.end(), identity.checks.begin(), identity.checks.end());
    }
    return report;
}

}  // namespace matchkern
