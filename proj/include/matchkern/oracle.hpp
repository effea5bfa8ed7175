#pragma once

#include <string>
#include <vector>

#include "matchkern/kernel.hpp"

namespace matchkern {

struct OracleCheck {
    std::string name;
    bool pass = false;
    double deviation = 0.0;
    std::string detail;
};

struct OracleReport {
    std::vector<OracleCheck> checks;
    bool all_pass() const;
};

// Brute-force route at tiny n: Cayley graph of S_{2n} over all
// transpositions, dense eigendecomposition, group kernel, double H-average
// down to cosets, diagonal normalized. Rows/columns follow
// enumerate_matchings(n). Guarded at n <= 3 (|S_6| = 720).
DenseMatrix group_kernel_projected(int n, const SpectralFilter& filter);

// Independent spectral route: combinatorial Laplacian of the unweighted
// quotient graph (neighbors of the matching module), eigendecomposed; the
// filter is applied to lambda_scale * (quotient eigenvalues). Guarded at
// n <= 6.
DenseMatrix quotient_graph_kernel(int n, const SpectralFilter& filter, double lambda_scale = 1.0);

// Compares the quotient-graph spectrum against {lambda_{2 rho}} after
// fitting one global scale from the smallest nonzero eigenvalues; on
// success returns the scale and checks multiplicities d_{2 rho}.
struct QuotientSpectrumResult {
    double scale = 0.0;
    bool eigenvalues_match = false;
    bool multiplicities_match = false;
    double max_relative_deviation = 0.0;
};
QuotientSpectrumResult quotient_spectrum_check(int n, const CharacterTable& chars);

// Max-abs difference between group_kernel_projected and the untruncated
// ZSF-based kernel, both diagonal-normalized.
OracleReport validate_spectral_identity(int n, double nu, double kappa, bool degree_correction);

// Full oracle battery for one (n, filter) configuration.
OracleReport run_oracle_suite(int n, double nu, double kappa, bool degree_correction);

}  // namespace matchkern
