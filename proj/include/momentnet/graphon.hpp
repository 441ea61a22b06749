#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "momentnet/inr.hpp"

namespace momentnet {

/// R x R symmetric matrix of values in [0,1]; the step-function graphon that is
/// constant on each cell [i/R, (i+1)/R) x [j/R, (j+1)/R).
class Grid {
public:
    Grid() = default;
    /// Throws ValidationError unless values has R*R entries, is symmetric and lies in [0,1].
    Grid(std::size_t resolution, std::vector<double> values);

    std::size_t resolution() const noexcept { return resolution_; }
    double operator()(std::size_t i, std::size_t j) const { return values_[i * resolution_ + j]; }
    std::span<const double> values() const noexcept { return values_; }

    /// Mean of each row (the discretized degree function).
    std::vector<double> row_means() const;
    double mean() const;

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    std::size_t resolution_ = 0;
    std::vector<double> values_;
};

/// CSV: first line "R", then R lines of R comma-separated decimals (shortest round-trip form).
std::string write_grid_csv(const Grid& grid);
Grid parse_grid_csv(std::string_view text);

/// Symmetric kernel W: [0,1]^2 -> [0,1]. Symmetry is structural: every kind is
/// evaluated at (min(x,y), max(x,y)).
class Graphon {
public:
    struct Analytic {
        int id;
    };
    struct Constant {
        double p;
    };
    struct Cosine {};
    struct Step {
        std::shared_ptr<const Grid> grid;
    };
    struct Model {
        std::shared_ptr<const InrParams> params;
    };
    using Kind = std::variant<Analytic, Constant, Cosine, Step, Model>;

    explicit Graphon(Kind kind);

    /// Throws DomainError for coordinates outside [0,1].
    double operator()(double x, double y) const;
    double eval_unchecked(double x, double y) const noexcept;

    const Kind& kind() const noexcept { return kind_; }
    std::string describe() const;

private:
    Kind kind_;
};

/// Ids 1..13 of the reference table: xy, exp(-(x^.7+y^.7)), ..., the two 2-block SBMs.
Graphon analytic_graphon(int id);
Graphon constant_graphon(double p);
/// 0.5 + 0.1 cos(pi x) cos(pi y)
Graphon cosine_graphon();
Graphon grid_graphon(Grid grid);
Graphon model_graphon(InrParams params);

inline double eval(const Graphon& w, double x, double y) { return w(x, y); }

/// values[i][j] = w((i+0.5)/R, (j+0.5)/R). Throws DomainError for R == 0.
Grid discretize(const Graphon& w, std::size_t resolution);

/// Parses "<id>", "constant:p", "cosine", "grid:PATH" or "model:PATH".
Graphon parse_graphon_spec(std::string_view spec);

/// Induced densities t'(F, W) by the midpoint rule with `resolution` nodes per axis.
/// Exact for step graphons whose cells align with the nodes and for constant graphons.
MomentVector quadrature_moments(const Graphon& w, std::size_t resolution);

/// Monte-Carlo estimate of t'(F, W) from `samples` uniform 4-tuples.
MomentVector mc_moments(const Graphon& w, std::size_t samples, std::uint64_t seed);

}  // namespace momentnet
