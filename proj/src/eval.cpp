#include "momentnet/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "momentnet/errors.hpp"
#include "momentnet/parallel.hpp"
#include "momentnet/rng.hpp"

namespace momentnet {

MomentDistance moment_distance(const MomentVector& a, const MomentVector& b) {
    MomentDistance d;
    double sq = 0;
    for (std::size_t i = 0; i < kNumMotifs; ++i) {
        const double diff = std::abs(a[i] - b[i]);
        sq += diff * diff;
        d.linf = std::max(d.linf, diff);
    }
    d.l2 = std::sqrt(sq);
    return d;
}

std::vector<std::size_t> degree_order(const Grid& grid) {
    const auto degrees = grid.row_means();
    std::vector<std::size_t> order(degrees.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return degrees[i] < degrees[j]; });
    return order;
}

double aligned_mse(const Grid& a, const Grid& b) {
    if (a.resolution() != b.resolution()) {
        throw DomainError("aligned_mse needs equal resolutions, got " + std::to_string(a.resolution()) + " and " +
                          std::to_string(b.resolution()));
    }
    const std::size_t r = a.resolution();
    const auto oa = degree_order(a);
    const auto ob = degree_order(b);
    double sum = 0;
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < r; ++j) {
            const double diff = a(oa[i], oa[j]) - b(ob[i], ob[j]);
            sum += diff * diff;
        }
    }
    return sum / static_cast<double>(r * r);
}

std::string_view to_string(CentralityMeasure m) {
    switch (m) {
        case CentralityMeasure::Degree: return "degree";
        case CentralityMeasure::Eigenvector: return "eigenvector";
        case CentralityMeasure::Katz: return "katz";
        case CentralityMeasure::PageRank: return "pagerank";
    }
    return "degree";
}

CentralityMeasure parse_centrality_measure(std::string_view name) {
    if (name == "degree") return CentralityMeasure::Degree;
    if (name == "eigenvector") return CentralityMeasure::Eigenvector;
    if (name == "katz") return CentralityMeasure::Katz;
    if (name == "pagerank") return CentralityMeasure::PageRank;
    throw ParseError(0, "unknown centrality measure '" + std::string(name) + "'");
}

std::vector<double> l2_normalized(std::span<const double> v) {
    double sq = 0;
    for (double x : v) sq += x * x;
    if (!(sq > 0.0)) throw NumericalError("cannot normalize a zero centrality vector");
    const double inv = 1.0 / std::sqrt(sq);
    std::vector<double> out(v.begin(), v.end());
    for (auto& x : out) x *= inv;
    return out;
}

namespace {

// Integrals of g(x) = exp(-x^0.7) and g(x)^2 over [0,1].
constexpr double kExpKernelMass = 0.5756845356235211;
constexpr double kExpKernelSquareMass = 0.3565229190333968;

constexpr double kPowerTolerance = 1e-10;
constexpr std::size_t kMaxIterations = 100000;

// y = T x with T = grid / R
void apply_kernel(const Grid& grid, std::span<const double> x, std::span<double> y) {
    const std::size_t r = grid.resolution();
    const double scale = 1.0 / static_cast<double>(r);
    for (std::size_t i = 0; i < r; ++i) {
        double s = 0;
        for (std::size_t j = 0; j < r; ++j) s += grid(i, j) * x[j];
        y[i] = s * scale;
    }
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

// Dominant eigenpair of T, eigenvector with unit Euclidean norm and positive largest-magnitude entry.
std::pair<double, std::vector<double>> power_iteration(const Grid& grid) {
    const std::size_t r = grid.resolution();
    std::vector<double> x(r, 1.0 / std::sqrt(static_cast<double>(r)));
    std::vector<double> y(r);
    double lambda = 0;
    for (std::size_t it = 0; it < kMaxIterations; ++it) {
        apply_kernel(grid, x, y);
        double norm = 0;
        for (double v : y) norm += v * v;
        norm = std::sqrt(norm);
        if (!(norm > 0.0)) throw NumericalError("kernel operator annihilates the iterate (zero graphon?)");
        for (auto& v : y) v /= norm;
        lambda = norm;
        const bool done = max_abs_diff(x, y) < kPowerTolerance;
        x.swap(y);
        if (done) break;
    }
    const auto largest = std::max_element(x.begin(), x.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
    if (*largest < 0) {
        for (auto& v : x) v = -v;
    }
    return {lambda, std::move(x)};
}

template <typename Step>
std::vector<double> fixed_point(std::size_t r, Step&& step) {
    std::vector<double> c(r, 1.0), next(r);
    for (std::size_t it = 0; it < kMaxIterations; ++it) {
        step(c, next);
        double scale = 0;
        for (double v : next) scale = std::max(scale, std::abs(v));
        const bool done = max_abs_diff(c, next) <= kPowerTolerance * std::max(1.0, scale);
        c.swap(next);
        if (done) return c;
        for (double v : c) {
            if (!std::isfinite(v)) throw NumericalError("centrality iteration diverged");
        }
    }
    throw NumericalError("centrality iteration did not converge");
}

}  // namespace

double kernel_spectral_radius(const Grid& grid) { return power_iteration(grid).first; }

CentralityProfile analytic_centrality(int graphon_id, CentralityMeasure measure, double param,
                                      std::span<const double> xs) {
    if (graphon_id != 1 && graphon_id != 2) {
        throw DomainError("analytic centralities exist only for graphons 1 and 2, got " + std::to_string(graphon_id));
    }
    CentralityProfile out;
    out.measure = measure;
    out.param = param;
    out.xs.assign(xs.begin(), xs.end());
    out.raw.reserve(xs.size());
    for (double x : xs) {
        if (!(x >= 0.0 && x <= 1.0)) throw DomainError("centrality evaluation point outside [0,1]");
        double v = 0;
        if (graphon_id == 1) {
            switch (measure) {
                case CentralityMeasure::Degree: v = x / 2; break;
                case CentralityMeasure::Eigenvector: v = std::sqrt(3.0) * x; break;
                case CentralityMeasure::Katz:
                    if (!(param < 3.0)) throw NumericalError("Katz attenuation must be below 3 for graphon 1");
                    v = (6.0 - 2.0 * param) + 3.0 * param * x;
                    break;
                case CentralityMeasure::PageRank: v = (1.0 - param) + 2.0 * param * x; break;
            }
        } else {
            const double g = std::exp(-std::pow(x, 0.7));
            switch (measure) {
                case CentralityMeasure::Degree: v = kExpKernelMass * g; break;
                case CentralityMeasure::Eigenvector: v = g / std::sqrt(kExpKernelSquareMass); break;
                case CentralityMeasure::Katz:
                    if (!(param * kExpKernelSquareMass < 1.0)) {
                        throw NumericalError("Katz attenuation too large for graphon 2");
                    }
                    v = 1.0 + param * kExpKernelMass * g / (1.0 - param * kExpKernelSquareMass);
                    break;
                case CentralityMeasure::PageRank: v = (1.0 - param) + param * g / kExpKernelMass; break;
            }
        }
        out.raw.push_back(v);
    }
    out.normalized = l2_normalized(out.raw);
    return out;
}

CentralityProfile numeric_centrality(const Grid& grid, CentralityMeasure measure, double param) {
    const std::size_t r = grid.resolution();
    if (r < 2) throw DomainError("numeric centrality needs resolution >= 2");
    CentralityProfile out;
    out.measure = measure;
    out.param = param;
    out.xs.resize(r);
    for (std::size_t i = 0; i < r; ++i) out.xs[i] = (static_cast<double>(i) + 0.5) / static_cast<double>(r);

    switch (measure) {
        case CentralityMeasure::Degree: out.raw = grid.row_means(); break;
        case CentralityMeasure::Eigenvector: {
            // Scaled to unit L2 norm as a function on [0,1].
            auto [lambda, v] = power_iteration(grid);
            const double scale = std::sqrt(static_cast<double>(r));
            for (auto& x : v) x *= scale;
            out.raw = std::move(v);
            break;
        }
        case CentralityMeasure::Katz: {
            const double radius = kernel_spectral_radius(grid);
            if (!(param * radius < 1.0)) {
                throw NumericalError("Katz attenuation " + std::to_string(param) + " times spectral radius " +
                                     std::to_string(radius) + " is not below 1");
            }
            out.raw = fixed_point(r, [&](std::span<const double> c, std::span<double> next) {
                apply_kernel(grid, c, next);
                for (auto& v : next) v = 1.0 + param * v;
            });
            break;
        }
        case CentralityMeasure::PageRank: {
            if (!(param >= 0.0 && param < 1.0)) throw DomainError("PageRank damping must lie in [0,1)");
            const auto degrees = grid.row_means();
            std::vector<double> scaled(r);
            out.raw = fixed_point(r, [&](std::span<const double> c, std::span<double> next) {
                for (std::size_t j = 0; j < r; ++j) scaled[j] = degrees[j] > 0.0 ? c[j] / degrees[j] : 0.0;
                apply_kernel(grid, scaled, next);
                for (auto& v : next) v = (1.0 - param) + param * v;
            });
            break;
        }
    }
    out.normalized = l2_normalized(out.raw);
    return out;
}

CentralityProfile numeric_centrality(const Graphon& w, CentralityMeasure measure, double param,
                                     std::size_t resolution) {
    if (resolution < 2) throw DomainError("numeric centrality needs resolution >= 2");
    return numeric_centrality(discretize(w, resolution), measure, param);
}

double rearranged_max_deviation(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw DomainError("profiles must have equal length");
    std::vector<double> sa(a.begin(), a.end()), sb(b.begin(), b.end());
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    return max_abs_diff(sa, sb);
}

Lemma1Bound lemma1_bound(std::size_t graphs, std::size_t nodes, int k, double eps) {
    if (graphs < 1 || nodes < 1 || k < 1) throw DomainError("lemma1_bound needs P, n, k >= 1");
    const double bias = static_cast<double>(k) * (k - 1) / (2.0 * static_cast<double>(nodes));
    if (eps < bias) return {};
    const double gap = eps - bias;
    const double rate = static_cast<double>(graphs) * static_cast<double>(nodes) / (4.0 * k * k);
    return {true, 2.0 * std::exp(-rate * gap * gap)};
}

std::size_t graphs_on_k_vertices(int k) {
    static constexpr std::array<std::size_t, 5> table{1, 2, 4, 11, 34};
    if (k < 1 || k > 5) throw DomainError("graph counts are tabulated for k in 1..5");
    return table[k - 1];
}

TheoryBound theorem_condition(std::size_t graphs, std::size_t nodes, int k, double zeta) {
    if (k < 2 || k > 5) throw DomainError("theorem_condition supports k in 2..5 (log2 k must be positive)");
    if (!(zeta > 0.0 && zeta < 1.0)) throw DomainError("zeta must lie in (0,1)");
    if (graphs < 1 || nodes < 1) throw DomainError("P and n must be positive");
    TheoryBound b;
    b.k = k;
    b.graphs = graphs;
    b.nodes = nodes;
    b.zeta = zeta;
    b.num_graphs_k = graphs_on_k_vertices(k);
    b.delta_m = std::pow(3.0, -static_cast<double>(k * k));
    b.sup_norm = 1.0;
    b.eta_cut = 22.0 * b.sup_norm / std::sqrt(std::log2(static_cast<double>(k)));
    b.eps_s = b.delta_m / 2.0;
    std::uint64_t inverse_delta = 1;
    for (int i = 0; i < k * k; ++i) inverse_delta *= 3;
    b.n_threshold = static_cast<double>(static_cast<std::uint64_t>(k * (k - 1)) * inverse_delta);
    const double gap = b.eps_s - static_cast<double>(k) * (k - 1) / (2.0 * static_cast<double>(nodes));
    const double rate = static_cast<double>(graphs) * static_cast<double>(nodes) / (4.0 * k * k);
    b.failure_probability = static_cast<double>(b.num_graphs_k) * 2.0 * std::exp(-rate * gap * gap);
    b.sample_size_ok = static_cast<double>(nodes) > b.n_threshold;
    b.applies = b.sample_size_ok && b.failure_probability < zeta;
    b.vacuous = b.eta_cut >= 1.0;
    return b;
}

ConcentrationResult simulate_concentration(const Graphon& w, std::size_t motif_index, std::size_t graphs,
                                           std::size_t nodes, double eps, std::size_t trials, std::uint64_t seed,
                                           unsigned jobs, std::size_t quadrature_resolution) {
    if (motif_index >= kNumMotifs) throw DomainError("motif index out of range");
    if (trials < 1 || graphs < 1) throw DomainError("trials and P must be positive");
    if (nodes < 4) throw DomainError("graphs need at least 4 vertices for the census");
    const int k = kMotifCatalog[motif_index].k;
    if (!(static_cast<double>(k) * (k - 1) / (2.0 * static_cast<double>(nodes)) < eps)) {
        throw DomainError("eps must exceed the finite-size bias k(k-1)/(2n)");
    }
    ConcentrationResult out;
    out.trials = trials;
    out.bound = lemma1_bound(graphs, nodes, k, eps);
    out.true_density = quadrature_moments(w, quadrature_resolution)[motif_index];

    std::vector<std::uint8_t> deviated(trials, 0);
    parallel_for(trials, jobs, [&](std::size_t t) {
        const auto trial_seed = derive_seed(seed, t);
        double sum = 0;
        for (std::size_t p = 0; p < graphs; ++p) {
            const auto sampled = sample_graph(w, nodes, derive_seed(trial_seed, p));
            sum += graph_moments(sampled.graph)[motif_index];
        }
        const double mean = sum / static_cast<double>(graphs);
        deviated[t] = std::abs(mean - out.true_density) >= eps ? 1 : 0;
    });
    const auto hits = std::count(deviated.begin(), deviated.end(), std::uint8_t{1});
    out.empirical_prob = static_cast<double>(hits) / static_cast<double>(trials);
    return out;
}

Prop1Gap prop1_gap(double p1, double p2, double alpha) {
    if (!(p1 >= 0.0 && p1 <= 1.0 && p2 >= 0.0 && p2 <= 1.0)) throw DomainError("p1, p2 must lie in [0,1]");
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in [0,1]");
    const double pa = alpha * p1 + (1.0 - alpha) * p2;
    return {pa * pa * (1.0 - pa), alpha * p1 * p1 * (1.0 - p1) + (1.0 - alpha) * p2 * p2 * (1.0 - p2)};
}

}  // namespace momentnet
