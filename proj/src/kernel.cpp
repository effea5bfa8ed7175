#include "matchkern/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace matchkern {

SpectralFilter::SpectralFilter(double nu, double kappa, bool degree_correction, int n)
    : nu_(nu), kappa_(kappa), degree_correction_(degree_correction), n_(n) {
    if (!(nu > 0)) throw std::invalid_argument("nu must be positive (or inf)");
    if (!(kappa > 0)) throw std::invalid_argument("kappa must be positive");
}

double SpectralFilter::exponent() const {
    if (heat()) return std::numeric_limits<double>::infinity();
    return degree_correction_ ? nu_ + 0.5 * n_ * (n_ - 1) : nu_;
}

double SpectralFilter::log_value(double lambda) const {
    if (lambda < 0) throw std::invalid_argument("lambda must be non-negative");
    if (heat()) return -0.5 * kappa_ * kappa_ * lambda;
    return -exponent() * std::log(2.0 * nu_ / (kappa_ * kappa_) + lambda);
}

double SpectralFilter::value(double lambda) const { return std::exp(log_value(lambda)); }

double auto_kappa(double nu, bool degree_correction, int n, const CharacterTable& chars) {
    if (n < 2) throw std::invalid_argument("auto_kappa: n >= 2 required");
    Partition second({n - 1, 1});
    double lambda2 = to_double(chars.laplacian_eigenvalue(second.doubled()));
    double log_d2 = log_of(chars.dimension(second.doubled()));
    if (std::isinf(nu)) return std::sqrt((std::log(2.0) + log_d2) / lambda2);
    double e = degree_correction ? nu + 0.5 * n * (n - 1) : nu;
    return std::sqrt(2.0 * nu * std::expm1((std::log(2.0) + log_d2) / (2.0 * e)) / lambda2);
}

namespace {

std::vector<Partition> resolve_truncation(const KernelConfig& cfg) {
    if (!cfg.truncation.empty()) return cfg.truncation;
    auto all = enumerate_partitions(cfg.n);
    int size = cfg.truncation_size > 0 ? cfg.truncation_size : 30;
    size = std::min<int>(size, static_cast<int>(all.size()));
    return select_truncation(cfg.n, size, cfg.heuristic);
}

}  // namespace

MatchingKernel::MatchingKernel(KernelConfig config, std::shared_ptr<CharacterTable> chars)
    : config_(std::move(config)),
      kappa_(0.0),
      filter_(1.0, 1.0, false, 1),  // replaced below once kappa is resolved
      chars_(chars ? std::move(chars) : std::make_shared<CharacterTable>()),
      provider_(config_.backend, chars_) {
    if (config_.n < 1) throw std::invalid_argument("kernel: n >= 1 required");
    kappa_ = config_.kappa_auto
                 ? auto_kappa(config_.nu, config_.degree_correction, config_.n, *chars_)
                 : config_.kappa;
    filter_ = SpectralFilter(config_.nu, kappa_, config_.degree_correction, config_.n);
    config_.truncation = resolve_truncation(config_);
    if (config_.truncation.empty()) throw std::invalid_argument("kernel: empty truncation set");

    double log_group_order = log_of(factorial(2 * config_.n));
    for (const auto& rho : config_.truncation) {
        if (rho.sum() != config_.n)
            throw std::invalid_argument("kernel: truncation partition of wrong degree");
        SpectralTerm term;
        term.rho = rho;
        term.eigenvalue = chars_->laplacian_eigenvalue(rho.doubled());
        term.dim = chars_->dimension(rho.doubled());
        term.log_weight =
            filter_.log_value(to_double(term.eigenvalue)) + log_of(term.dim) - log_group_order;
        term.weight = std::exp(term.log_weight);
        terms_.push_back(std::move(term));
    }
    std::sort(terms_.begin(), terms_.end(), [](const SpectralTerm& a, const SpectralTerm& b) {
        if (a.log_weight != b.log_weight) return a.log_weight > b.log_weight;
        return a.rho > b.rho;
    });
    double max_log = terms_.front().log_weight;
    for (const auto& term : terms_) {
        shifted_weights_.push_back(std::exp(term.log_weight - max_log));
        weight_sum_ += shifted_weights_.back();
    }
}

double MatchingKernel::value(const Matching& x, const Matching& y) const {
    if (x.size() != config_.n || y.size() != config_.n)
        throw std::invalid_argument("kernel: matching size mismatch");
    return class_value(generalized_distance(x, y));
}

double MatchingKernel::class_value(const Partition& mu) const {
    {
        std::shared_lock lock(class_mutex_);
        auto it = class_cache_.find(mu);
        if (it != class_cache_.end()) return it->second;
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < terms_.size(); ++i)
        acc += shifted_weights_[i] * to_double(provider_.value(terms_[i].rho, mu));
    double v = acc / weight_sum_;
    std::unique_lock lock(class_mutex_);
    auto [it, inserted] = class_cache_.emplace(mu, v);
    return it->second;
}

DenseMatrix MatchingKernel::matrix(const std::vector<Matching>& xs) const {
    int m = static_cast<int>(xs.size());
    DenseMatrix out(m, m);
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < m; ++i) {
        for (int j = i; j < m; ++j) {
            double v = value(xs[static_cast<std::size_t>(i)], xs[static_cast<std::size_t>(j)]);
            out.at(i, j) = v;
            out.at(j, i) = v;
        }
    }
    return out;
}

DenseMatrix MatchingKernel::matrix_serial(const std::vector<Matching>& xs) const {
    int m = static_cast<int>(xs.size());
    DenseMatrix out(m, m);
    for (int i = 0; i < m; ++i) {
        for (int j = i; j < m; ++j) {
            double v = value(xs[static_cast<std::size_t>(i)], xs[static_cast<std::size_t>(j)]);
            out.at(i, j) = v;
            out.at(j, i) = v;
        }
    }
    return out;
}

double MatchingKernel::truncation_error() const {
    return approximation_error(config_.n, config_.nu, kappa_, config_.degree_correction,
                               config_.truncation, *chars_);
}

double approximation_error(int n, double nu, double kappa, bool degree_correction,
                           const std::vector<Partition>& truncation,
                           const CharacterTable& chars) {
    SpectralFilter filter(nu, kappa, degree_correction, n);
    auto all = enumerate_partitions(n);
    std::vector<double> log_terms;
    log_terms.reserve(all.size());
    for (const auto& rho : all) {
        double lambda = to_double(chars.laplacian_eigenvalue(rho.doubled()));
        log_terms.push_back(2.0 * filter.log_value(lambda) + log_of(chars.dimension(rho.doubled())));
    }
    double max_log = *std::max_element(log_terms.begin(), log_terms.end());
    std::vector<bool> kept(all.size(), false);
    for (const auto& rho : truncation) {
        auto it = std::find(all.begin(), all.end(), rho);
        if (it != all.end()) kept[static_cast<std::size_t>(it - all.begin())] = true;
    }
    double total = 0.0, dropped = 0.0;
    for (std::size_t i = 0; i < all.size(); ++i) {
        double t = std::exp(log_terms[i] - max_log);
        total += t;
        if (!kept[i]) dropped += t;
    }
    return std::sqrt(dropped / total);
}

std::vector<DensityRow> spectral_density_report(int n, double nu, double kappa,
                                                bool degree_correction,
                                                const CharacterTable& chars) {
    SpectralFilter filter(nu, kappa, degree_correction, n);
    std::vector<DensityRow> rows;
    for (const auto& rho : enumerate_partitions(n)) {
        double lambda = to_double(chars.laplacian_eigenvalue(rho.doubled()));
        rows.push_back({rho, lambda,
                        2.0 * filter.log_value(lambda) + log_of(chars.dimension(rho.doubled()))});
    }
    return rows;
}

}  // namespace matchkern
