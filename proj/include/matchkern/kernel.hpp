#pragma once

#include <cmath>
#include <limits>
#include <memory>
#include <shared_mutex>
#include <unordered_map>
#include <vector>

#include "matchkern/matching.hpp"
#include "matchkern/partition.hpp"
#include "matchkern/sym_group.hpp"
#include "matchkern/zsf.hpp"

namespace matchkern {

struct DenseMatrix {
    int rows = 0, cols = 0;
    std::vector<double> data;

    DenseMatrix() = default;
    DenseMatrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}
    double& at(int i, int j) { return data[static_cast<std::size_t>(i) * cols + j]; }
    double at(int i, int j) const { return data[static_cast<std::size_t>(i) * cols + j]; }
};

// Spectral filter Phi_{nu,kappa}: exp(-kappa^2 lambda / 2) for the heat
// kernel (nu = inf), (2 nu / kappa^2 + lambda)^{-e} for Matern. The Matern
// exponent e is nu, or nu + d/2 with d = n(n-1) when degree correction is
// on; the heat filter takes no correction. Evaluation is done in log space
// so that huge exponents cannot underflow intermediate values.
class SpectralFilter {
public:
    SpectralFilter(double nu, double kappa, bool degree_correction, int n);

    bool heat() const { return std::isinf(nu_); }
    double exponent() const;
    double log_value(double lambda) const;
    double value(double lambda) const;
    double nu() const { return nu_; }
    double kappa() const { return kappa_; }

private:
    double nu_, kappa_;
    bool degree_correction_;
    int n_;
};

// Lengthscale making the (n) and (n-1,1) spectral-density terms
// Phi(lambda)^2 d sit at ratio 2. Closed forms: heat
// kappa^2 = ln(2 d2) / lambda2; Matern
// kappa^2 = 2 nu ((2 d2)^{1/(2e)} - 1) / lambda2, with
// lambda2 = lambda_{2(n-1,1)} and d2 = d_{2(n-1,1)}.
double auto_kappa(double nu, bool degree_correction, int n, const CharacterTable& chars);

struct KernelConfig {
    int n = 0;
    double nu = std::numeric_limits<double>::infinity();  // inf selects the heat filter
    double kappa = 0.0;
    bool kappa_auto = true;
    std::vector<Partition> truncation;  // empty: use heuristic selection
    TruncationHeuristic heuristic = TruncationHeuristic::MaxPart;
    int truncation_size = 0;  // 0: min(30, p(n))
    bool degree_correction = true;
    ZsfBackendKind backend = ZsfBackendKind::ZonalPolynomial;
};

struct SpectralTerm {
    Partition rho;
    Rat eigenvalue;     // lambda_{2 rho}, exact
    Int dim;            // d_{2 rho}
    double log_weight;  // log of Phi(lambda) d / (2n)!
    double weight;      // may underflow to 0; normalized copies are used internally
};

// Truncated heat/Matern kernel on matchings of size n,
//   k(x,y) = sum_{rho in R} w_rho phi_rho(d(x,y)) / sum_{rho in R} w_rho,
// normalized so that k(x,x) = 1 exactly.
class MatchingKernel {
public:
    explicit MatchingKernel(KernelConfig config,
                            std::shared_ptr<CharacterTable> chars = nullptr);

    double value(const Matching& x, const Matching& y) const;

    // Gram matrix, OpenMP-parallel over rows. Entries are pure functions of
    // cached exact values, so the result is identical to matrix_serial().
    DenseMatrix matrix(const std::vector<Matching>& xs) const;
    // Serial reference kept for testing and benchmarking.
    DenseMatrix matrix_serial(const std::vector<Matching>& xs) const;

    const KernelConfig& config() const { return config_; }
    double resolved_kappa() const { return kappa_; }
    const std::vector<SpectralTerm>& terms() const { return terms_; }
    double truncation_error() const;  // predicted relative L2 error of this config
    const SpectralFilter& filter() const { return filter_; }

private:
    double class_value(const Partition& mu) const;

    KernelConfig config_;
    double kappa_;
    SpectralFilter filter_;
    std::shared_ptr<CharacterTable> chars_;
    mutable ZsfProvider provider_;
    std::vector<SpectralTerm> terms_;
    std::vector<double> shifted_weights_;  // exp(log_weight - max log_weight)
    double weight_sum_ = 0.0;
    // k depends on x, y only through d(x, y); one value per distance class
    mutable std::shared_mutex class_mutex_;
    mutable std::unordered_map<Partition, double> class_cache_;
};

// Relative L2 truncation error
//   sqrt( sum_{rho not in R} Phi(lambda)^2 d  /  sum_{rhoterms all} Phi(lambda)^2 d ),
// requiring no zonal spherical function values.
double approximation_error(int n, double nu, double kappa, bool degree_correction,
                           const std::vector<Partition>& truncation,
                           const CharacterTable& chars);

struct DensityRow {
    Partition rho;
    double lambda;
    double log_density;  // log(Phi(lambda)^2 d_{2 rho})
};

// One row per partition of n; CSV-ready spectral-density data.
std::vector<DensityRow> spectral_density_report(int n, double nu, double kappa,
                                                bool degree_correction,
                                                const CharacterTable& chars);

}  // namespace matchkern
