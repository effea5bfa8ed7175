#include <CLI11.hpp>

#include <sys/resource.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "matchkern/io.hpp"
#include "matchkern/kernel.hpp"
#include "matchkern/matching.hpp"
#include "matchkern/oracle.hpp"
#include "matchkern/phylo.hpp"
#include "matchkern/zsf.hpp"

namespace mk = matchkern;

namespace {

double parse_nu(const std::string& s) {
    if (s == "inf" || s == "Inf" || s == "INF") return std::numeric_limits<double>::infinity();
    return std::stod(s);
}

mk::ZsfBackendKind parse_backend(const std::string& s) {
    if (s == "zp") return mk::ZsfBackendKind::ZonalPolynomial;
    if (s == "explicit") return mk::ZsfBackendKind::ExplicitFormula;
    if (s == "avg") return mk::ZsfBackendKind::CharacterAveraging;
    throw CLI::ValidationError("backend must be one of zp|explicit|avg");
}

mk::TruncationHeuristic parse_heuristic(const std::string& s) {
    if (s == "max-part") return mk::TruncationHeuristic::MaxPart;
    if (s == "length") return mk::TruncationHeuristic::Length;
    if (s == "min-part") return mk::TruncationHeuristic::MinPart;
    throw CLI::ValidationError("heuristic must be one of max-part|length|min-part");
}

std::string read_input(const std::string& path) {
    if (path.empty() || path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open input file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << text;
}

double peak_rss_mb() {
    struct rusage usage{};
    getrusage(RUSAGE_SELF, &usage);
    return static_cast<double>(usage.ru_maxrss) / 1024.0;
}

struct KernelArgs {
    int n = 0;
    std::string nu = "inf";
    std::string kappa = "auto";
    int truncation_size = 0;
    std::string heuristic = "max-part";
    std::string backend = "zp";
    bool no_degree_correction = false;

    mk::KernelConfig config() const {
        mk::KernelConfig cfg;
        cfg.n = n;
        cfg.nu = parse_nu(nu);
        if (kappa == "auto") {
            cfg.kappa_auto = true;
        } else {
            cfg.kappa_auto = false;
            cfg.kappa = std::stod(kappa);
        }
        cfg.truncation_size = truncation_size;
        cfg.heuristic = parse_heuristic(heuristic);
        cfg.degree_correction = !no_degree_correction;
        cfg.backend = parse_backend(backend);
        return cfg;
    }
};

void add_kernel_flags(CLI::App* cmd, KernelArgs& args, bool with_backend = true) {
    cmd->add_option("--n", args.n, "matching size n")->required();
    cmd->add_option("--nu", args.nu, "smoothness nu (positive float or 'inf')");
    cmd->add_option("--kappa", args.kappa, "lengthscale kappa (positive float or 'auto')");
    cmd->add_option("--truncation-size", args.truncation_size,
                    "number of partitions kept (default min(30, p(n)))");
    cmd->add_option("--heuristic", args.heuristic, "max-part|length|min-part");
    if (with_backend) cmd->add_option("--backend", args.backend, "zp|explicit|avg");
    cmd->add_flag("--no-degree-correction", args.no_degree_correction,
                  "disable the Matern degree correction");
}

int cmd_kernel(const KernelArgs& kargs, const std::string& input, int random_count,
               std::uint64_t seed, const std::string& output, const std::string& format) {
    std::vector<mk::Matching> xs;
    if (random_count > 0) {
        for (int i = 0; i < random_count; ++i)
            xs.push_back(mk::random_matching(kargs.n, seed + static_cast<std::uint64_t>(i)));
    } else {
        xs = mk::matchings_from_json(read_input(input));
        for (const auto& x : xs)
            if (x.size() != kargs.n)
                throw std::runtime_error("input matching size does not match --n");
    }
    mk::MatchingKernel kernel(kargs.config());
    mk::DenseMatrix gram = kernel.matrix(xs);
    std::cerr << "n=" << kargs.n << " nu=" << kargs.nu
              << " kappa=" << mk::format_double(kernel.resolved_kappa())
              << " |R|=" << kernel.terms().size()
              << " predicted_error=" << mk::format_double(kernel.truncation_error()) << "\n";
    write_output(output, format == "json" ? mk::matrix_to_json(gram) : mk::matrix_to_csv(gram));
    return 0;
}

int cmd_zsf(const std::vector<int>& rho_parts, const std::string& backend,
            const std::string& output) {
    mk::Partition rho = mk::Partition::from_unsorted(rho_parts);
    mk::ZsfProvider provider(parse_backend(backend));
    std::string out = "mu,value,value_float\n";
    for (const auto& [mu, v] : provider.table(rho))
        out += mu.to_string() + "," + mk::rat_string(v) + "," +
               mk::format_double(mk::to_double(v)) + "\n";
    write_output(output, out);
    return 0;
}

int cmd_spectrum(const KernelArgs& kargs, bool density, const std::string& output) {
    mk::CharacterTable chars;
    double nu = parse_nu(kargs.nu);
    double kappa = kargs.kappa == "auto"
                       ? mk::auto_kappa(nu, !kargs.no_degree_correction, kargs.n, chars)
                       : std::stod(kargs.kappa);
    std::string out;
    if (density) {
        out = "rho,lambda,log_density\n";
        for (const auto& row : mk::spectral_density_report(kargs.n, nu, kappa,
                                                           !kargs.no_degree_correction, chars))
            out += row.rho.to_string() + "," + mk::format_double(row.lambda) + "," +
                   mk::format_double(row.log_density) + "\n";
    } else {
        mk::SpectralFilter filter(nu, kappa, !kargs.no_degree_correction, kargs.n);
        double log_order = mk::log_of(mk::factorial(2 * kargs.n));
        out = "rho,lambda,dim,weight\n";
        for (const auto& rho : mk::enumerate_partitions(kargs.n)) {
            mk::Rat lambda = chars.laplacian_eigenvalue(rho.doubled());
            mk::Int dim = chars.dimension(rho.doubled());
            double log_weight =
                filter.log_value(mk::to_double(lambda)) + mk::log_of(dim) - log_order;
            out += rho.to_string() + "," + mk::format_double(mk::to_double(lambda)) + "," +
                   dim.get_str() + "," + mk::format_double(std::exp(log_weight)) + "\n";
        }
    }
    write_output(output, out);
    return 0;
}

int cmd_approx_error(const KernelArgs& kargs, int max_terms, const std::string& output) {
    mk::CharacterTable chars;
    double nu = parse_nu(kargs.nu);
    double kappa = kargs.kappa == "auto"
                       ? mk::auto_kappa(nu, !kargs.no_degree_correction, kargs.n, chars)
                       : std::stod(kargs.kappa);
    auto all = mk::enumerate_partitions(kargs.n);
    int cap = std::min<int>(max_terms, static_cast<int>(all.size()));
    std::string out = "terms,error\n";
    for (int size = 1; size <= cap; ++size) {
        auto truncation = mk::select_truncation(kargs.n, size, parse_heuristic(kargs.heuristic));
        double err = mk::approximation_error(kargs.n, nu, kappa, !kargs.no_degree_correction,
                                             truncation, chars);
        out += std::to_string(size) + "," + mk::format_double(err) + "\n";
    }
    write_output(output, out);
    return 0;
}

int cmd_bench(const std::vector<int>& n_list, const std::vector<std::string>& backend_list,
              int matrix_size, int trials, std::uint64_t seed, bool include_serial,
              const std::string& output) {
    struct Row {
        int n;
        std::string backend;
        bool skipped;
        double mean = 0, stddev = 0, peak_mb = 0;
    };
    std::vector<Row> rows;
    for (int n : n_list) {
        std::vector<mk::Matching> xs;
        for (int i = 0; i < matrix_size; ++i)
            xs.push_back(mk::random_matching(n, seed + static_cast<std::uint64_t>(i)));
        std::vector<std::string> variants = backend_list;
        if (include_serial) variants.push_back("zp-serial");
        for (const auto& name : variants) {
            bool serial = name == "zp-serial";
            mk::ZsfBackendKind kind = parse_backend(serial ? "zp" : name);
            Row row{n, name, false};
            if ((kind == mk::ZsfBackendKind::ExplicitFormula &&
                 n > mk::ZsfProvider::kExplicitLimit) ||
                (kind == mk::ZsfBackendKind::CharacterAveraging &&
                 n > mk::ZsfProvider::kAveragingLimit)) {
                row.skipped = true;
                rows.push_back(row);
                continue;
            }
            std::vector<double> times;
            for (int trial = 0; trial < trials; ++trial) {
                mk::KernelConfig cfg;
                cfg.n = n;
                cfg.backend = kind;
                auto start = std::chrono::steady_clock::now();
                mk::MatchingKernel kernel(cfg);  // fresh caches each trial
                mk::DenseMatrix gram = serial ? kernel.matrix_serial(xs) : kernel.matrix(xs);
                auto stop = std::chrono::steady_clock::now();
                times.push_back(std::chrono::duration<double>(stop - start).count());
                if (gram.at(0, 0) < 0.5) throw std::logic_error("unit diagonal violated");
            }
            double mean = 0;
            for (double t : times) mean += t;
            mean /= static_cast<double>(times.size());
            double var = 0;
            for (double t : times) var += (t - mean) * (t - mean);
            row.mean = mean;
            row.stddev = times.size() > 1 ? std::sqrt(var / (times.size() - 1.0)) : 0.0;
            row.peak_mb = peak_rss_mb();
            rows.push_back(row);
        }
    }
    std::ostringstream human;
    human << "n backend mean_s stddev_s peak_mb\n";
    std::string csv = "n,backend,mean_seconds,stddev_seconds,peak_mb\n";
    for (const auto& row : rows) {
        if (row.skipped) {
            human << row.n << " " << row.backend << " -- -- --\n";
            csv += std::to_string(row.n) + "," + row.backend + ",--,--,--\n";
        } else {
            human << row.n << " " << row.backend << " " << mk::format_double(row.mean) << " "
                  << mk::format_double(row.stddev) << " " << mk::format_double(row.peak_mb)
                  << "\n";
            csv += std::to_string(row.n) + "," + row.backend + "," + mk::format_double(row.mean) +
                   "," + mk::format_double(row.stddev) + "," + mk::format_double(row.peak_mb) +
                   "\n";
        }
    }
    std::cout << human.str();
    if (!output.empty()) write_output(output, csv);
    return 0;
}

int cmd_oracle(const KernelArgs& kargs) {
    mk::CharacterTable chars;
    double nu = parse_nu(kargs.nu);
    double kappa = kargs.kappa == "auto"
                       ? mk::auto_kappa(nu, !kargs.no_degree_correction, kargs.n, chars)
                       : std::stod(kargs.kappa);
    auto report = mk::run_oracle_suite(kargs.n, nu, kappa, !kargs.no_degree_correction);
    for (const auto& check : report.checks)
        std::cout << (check.pass ? "PASS" : "FAIL") << " " << check.name
                  << " (max deviation " << mk::format_double(check.deviation) << "; "
                  << check.detail << ")\n";
    return report.all_pass() ? 0 : 1;
}

int cmd_tree_convert(const std::string& action, const std::string& input,
                     const std::string& output) {
    std::string text = read_input(input);
    if (action == "encode") {
        write_output(output, mk::matching_to_json(mk::dh_encode(mk::PhyloTree::parse_newick(text))) + "\n");
    } else if (action == "decode") {
        write_output(output, mk::dh_decode(mk::matching_from_json(text)).newick() + "\n");
    } else if (action == "embed") {
        write_output(output, mk::matching_to_json(mk::richman_embed(mk::PhyloTree::parse_newick(text))) + "\n");
    }
    return 0;
}

// Checks whether b = s2*s1*a for at most two transpositions over the
// elements of the symmetric difference.
bool embedding_within_two_transpositions(const mk::Matching& a, const mk::Matching& b) {
    if (a == b) return true;
    std::vector<int> affected;
    for (const auto& [x, y] : a.pairs()) {
        if (!b.contains(x, y)) {
            affected.push_back(x);
            affected.push_back(y);
        }
    }
    if (affected.size() > 8) return false;
    int m = 2 * a.size();
    auto transposed = [m](int u, int v, const mk::Matching& src) {
        std::vector<int> img(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) img[static_cast<std::size_t>(i)] = i + 1;
        std::swap(img[static_cast<std::size_t>(u - 1)], img[static_cast<std::size_t>(v - 1)]);
        return mk::act(mk::Permutation(std::move(img)), src);
    };
    for (std::size_t i = 0; i < affected.size(); ++i) {
        for (std::size_t j = i + 1; j < affected.size(); ++j) {
            mk::Matching once = transposed(affected[i], affected[j], a);
            if (once == b) return true;
            for (std::size_t k = 0; k < affected.size(); ++k)
                for (std::size_t l = k + 1; l < affected.size(); ++l)
                    if (transposed(affected[k], affected[l], once) == b) return true;
        }
    }
    return false;
}

int cmd_tree_nni_check(const std::string& input) {
    mk::PhyloTree tree = mk::PhyloTree::parse_newick(read_input(input));
    mk::Matching embedded = mk::richman_embed(tree);
    int failures = 0;
    auto nbs = mk::nni_neighbors(tree);
    for (const auto& nb : nbs) {
        if (!embedding_within_two_transpositions(embedded, mk::richman_embed(nb))) ++failures;
    }
    std::cout << (failures == 0 ? "PASS" : "FAIL") << " embedded distance <= 2 for "
              << nbs.size() << " NNI moves (" << failures << " failures)\n";
    return failures == 0 ? 0 : 1;
}

int cmd_tree_counterexample(int prop, int n) {
    if (prop == 6) {
        auto result = mk::nni_move_distant_matchings(n);
        std::cout << "tree1: " << result.tree1.newick() << "\n";
        std::cout << "tree2: " << result.tree2.newick() << "\n";
        std::cout << "x1: " << mk::matching_to_json(result.x1) << "\n";
        std::cout << "x2: " << mk::matching_to_json(result.x2) << "\n";
        bool pass = result.nni_adjacent && 2 * result.distance_lower_bound >= n - 1;
        std::cout << (pass ? "PASS" : "FAIL") << " NNI-adjacent trees with quotient distance >= "
                  << result.distance_lower_bound << " (>= (n-1)/2)\n";
        return pass ? 0 : 1;
    }
    if (prop == 7) {
        auto result = mk::transposition_distant_trees(n);
        std::cout << "x1: " << mk::matching_to_json(result.x1) << "\n";
        std::cout << "x2: " << mk::matching_to_json(result.x2) << "\n";
        std::cout << "height(T1)=" << result.height1 << " height(T2)=" << result.height2 << "\n";
        bool pass = 2 * result.height_gap >= n - 4;
        std::cout << (pass ? "PASS" : "FAIL") << " single transposition changes tree height by "
                  << result.height_gap << " (>= n/2 - 2)\n";
        return pass ? 0 : 1;
    }
    throw CLI::ValidationError("--prop must be 6 or 7");
}

}  // namespace

int main(int argc, char** argv) {
    if (const char* env = std::getenv("MATCHKERN_THREADS")) {
#ifdef _OPENMP
        int threads = std::atoi(env);
        if (threads > 0) omp_set_num_threads(threads);
#endif
    }

    CLI::App app{"Heat and Matern kernels on perfect matchings"};
    app.require_subcommand(1);

    // kernel
    KernelArgs kernel_args;
    std::string input, output, format = "csv";
    int random_count = 0;
    std::uint64_t seed = 0;
    auto* kernel_cmd = app.add_subcommand("kernel", "compute a Gram matrix");
    add_kernel_flags(kernel_cmd, kernel_args);
    kernel_cmd->add_option("--input", input, "JSON matchings file ('-' for stdin)");
    kernel_cmd->add_option("--random", random_count, "generate COUNT random matchings");
    kernel_cmd->add_option("--seed", seed, "random seed");
    kernel_cmd->add_option("--output", output, "output file (default stdout)");
    kernel_cmd->add_option("--format", format, "csv|json");

    // zsf
    std::vector<int> rho_parts;
    std::string zsf_backend = "zp", zsf_output;
    auto* zsf_cmd = app.add_subcommand("zsf", "zonal spherical function table for one rho");
    zsf_cmd->add_option("--rho", rho_parts, "partition, e.g. --rho 4 2 1")->required();
    zsf_cmd->add_option("--backend", zsf_backend, "zp|explicit|avg");
    zsf_cmd->add_option("--output", zsf_output, "output file");

    // spectrum
    KernelArgs spectrum_args;
    bool density = false;
    std::string spectrum_output;
    auto* spectrum_cmd = app.add_subcommand("spectrum", "eigenvalue/dimension/weight table");
    add_kernel_flags(spectrum_cmd, spectrum_args, false);
    spectrum_cmd->add_flag("--density", density, "emit spectral-density rows instead");
    spectrum_cmd->add_option("--output", spectrum_output, "output file");

    // approx-error
    KernelArgs approx_args;
    int max_terms = 60;
    std::string approx_output;
    auto* approx_cmd = app.add_subcommand("approx-error", "relative L2 truncation error by |R|");
    add_kernel_flags(approx_cmd, approx_args, false);
    approx_cmd->add_option("--max-terms", max_terms, "largest |R| reported");
    approx_cmd->add_option("--output", approx_output, "output file");

    // bench
    std::vector<int> n_list{5, 6};
    std::vector<std::string> backend_list{"zp", "explicit", "avg"};
    int matrix_size = 100, trials = 5;
    std::uint64_t bench_seed = 0;
    bool include_serial = false;
    std::string bench_output;
    auto* bench_cmd = app.add_subcommand("bench", "wall-clock / peak-memory comparison");
    bench_cmd->add_option("--n-list", n_list, "matching sizes");
    bench_cmd->add_option("--backend-list", backend_list, "backends to time");
    bench_cmd->add_option("--matrix-size", matrix_size, "Gram matrix side");
    bench_cmd->add_option("--trials", trials, "trials per cell");
    bench_cmd->add_option("--seed", bench_seed, "random seed");
    bench_cmd->add_flag("--include-serial", include_serial, "add a serial zp reference row");
    bench_cmd->add_option("--output", bench_output, "CSV output file");

    // oracle
    KernelArgs oracle_args;
    oracle_args.nu = "inf";
    oracle_args.kappa = "1.0";
    auto* oracle_cmd = app.add_subcommand("oracle", "brute-force validation suite (n <= 6)");
    add_kernel_flags(oracle_cmd, oracle_args, false);

    // tree
    auto* tree_cmd = app.add_subcommand("tree", "phylogenetic-tree encodings and checks");
    tree_cmd->require_subcommand(1);
    std::string tree_input, tree_output;
    auto* encode_cmd = tree_cmd->add_subcommand("encode", "Newick -> matching JSON");
    auto* decode_cmd = tree_cmd->add_subcommand("decode", "matching JSON -> Newick");
    auto* embed_cmd = tree_cmd->add_subcommand("embed", "Newick -> matching JSON (auxiliary label)");
    for (auto* c : {encode_cmd, decode_cmd, embed_cmd}) {
        c->add_option("--input", tree_input, "input file ('-' for stdin)");
        c->add_option("--output", tree_output, "output file");
    }
    auto* nni_cmd = tree_cmd->add_subcommand("nni-check", "embedded distance <= 2 over NNI moves");
    nni_cmd->add_option("--input", tree_input, "Newick input file");
    int prop = 6, ce_n = 8;
    auto* ce_cmd = tree_cmd->add_subcommand("counterexample", "negative-result constructions");
    ce_cmd->add_option("--prop", prop, "6 or 7")->required();
    ce_cmd->add_option("--n", ce_n, "matching size n")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (kernel_cmd->parsed())
            return cmd_kernel(kernel_args, input, random_count, seed, output, format);
        if (zsf_cmd->parsed()) return cmd_zsf(rho_parts, zsf_backend, zsf_output);
        if (spectrum_cmd->parsed()) return cmd_spectrum(spectrum_args, density, spectrum_output);
        if (approx_cmd->parsed()) return cmd_approx_error(approx_args, max_terms, approx_output);
        if (bench_cmd->parsed())
            return cmd_bench(n_list, backend_list, matrix_size, trials, bench_seed,
                             include_serial, bench_output);
        if (oracle_cmd->parsed()) return cmd_oracle(oracle_args);
        if (tree_cmd->parsed()) {
            if (encode_cmd->parsed()) return cmd_tree_convert("encode", tree_input, tree_output);
            if (decode_cmd->parsed()) return cmd_tree_convert("decode", tree_input, tree_output);
            if (embed_cmd->parsed()) return cmd_tree_convert("embed", tree_input, tree_output);
            if (nni_cmd->parsed()) return cmd_tree_nni_check(tree_input);
            if (ce_cmd->parsed()) return cmd_tree_counterexample(prop, ce_n);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
