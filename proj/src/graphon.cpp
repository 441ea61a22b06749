#include "momentnet/graphon.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>

#include "momentnet/errors.hpp"
#include "momentnet/graph.hpp"
#include "momentnet/rng.hpp"

namespace momentnet {

Grid::Grid(std::size_t resolution, std::vector<double> values) : resolution_(resolution), values_(std::move(values)) {
    if (resolution_ == 0) throw ValidationError("grid resolution must be positive");
    if (values_.size() != resolution_ * resolution_) throw ValidationError("grid needs R*R values");
    for (std::size_t i = 0; i < resolution_; ++i) {
        for (std::size_t j = 0; j < resolution_; ++j) {
            const double v = values_[i * resolution_ + j];
            if (!(v >= 0.0 && v <= 1.0)) throw ValidationError("grid value outside [0,1]");
            if (v != values_[j * resolution_ + i]) throw ValidationError("grid is not symmetric");
        }
    }
}

std::vector<double> Grid::row_means() const {
    std::vector<double> out(resolution_, 0.0);
    for (std::size_t i = 0; i < resolution_; ++i) {
        double s = 0;
        for (std::size_t j = 0; j < resolution_; ++j) s += (*this)(i, j);
        out[i] = s / static_cast<double>(resolution_);
    }
    return out;
}

double Grid::mean() const {
    double s = 0;
    for (double v : values_) s += v;
    return values_.empty() ? 0.0 : s / static_cast<double>(values_.size());
}

std::string write_grid_csv(const Grid& grid) {
    const std::size_t r = grid.resolution();
    std::string out = std::to_string(r) + "\n";
    out.reserve(r * r * 20);
    char buf[32];
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < r; ++j) {
            if (j) out += ',';
            auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, grid(i, j));
            out.append(buf, ptr);
        }
        out += '\n';
    }
    return out;
}

Grid parse_grid_csv(std::string_view text) {
    std::size_t pos = 0;
    std::size_t line = 0;
    auto next_line = [&]() -> std::string_view {
        if (pos >= text.size()) throw ParseError(line + 1, "unexpected end of grid file");
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        auto s = text.substr(pos, end - pos);
        if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
        pos = end + 1;
        ++line;
        return s;
    };
    const auto header = next_line();
    std::size_t r = 0;
    auto [hp, hec] = std::from_chars(header.data(), header.data() + header.size(), r);
    if (hec != std::errc{} || hp != header.data() + header.size() || r == 0) {
        throw ParseError(line, "expected a positive resolution");
    }
    std::vector<double> values;
    values.reserve(r * r);
    for (std::size_t i = 0; i < r; ++i) {
        const auto row = next_line();
        const char* p = row.data();
        const char* end = row.data() + row.size();
        for (std::size_t j = 0; j < r; ++j) {
            double v = 0;
            auto [ptr, ec] = std::from_chars(p, end, v);
            if (ec != std::errc{}) throw ParseError(line, "invalid number in column " + std::to_string(j + 1));
            p = ptr;
            if (j + 1 < r) {
                if (p == end || *p != ',') throw ParseError(line, "expected " + std::to_string(r) + " columns");
                ++p;
            }
            values.push_back(v);
        }
        if (p != end) throw ParseError(line, "too many columns");
    }
    while (pos < text.size()) {
        const auto rest = next_line();
        if (!rest.empty()) throw ParseError(line, "trailing content after grid rows");
    }
    return Grid(r, std::move(values));
}

namespace {

double analytic_kernel(int id, double lo, double hi) noexcept {
    // lo <= hi
    switch (id) {
        case 1: return lo * hi;
        case 2: return std::exp(-(std::pow(lo, 0.7) + std::pow(hi, 0.7)));
        case 3: return 0.25 * (lo * lo + hi * hi + std::sqrt(lo) + std::sqrt(hi));
        case 4: return 0.5 * (lo + hi);
        case 5: return 1.0 / (1.0 + std::exp(-2.0 * (lo * lo + hi * hi)));
        case 6: return 1.0 / (1.0 + std::exp(-hi * hi - lo * lo * lo * lo));
        case 7: return std::exp(-std::pow(hi, 0.75));
        case 8: return std::exp(-0.5 * (lo + std::sqrt(lo) + std::sqrt(hi)));
        case 9: return std::log1p(hi);
        case 10: return hi - lo;
        case 11: return 1.0 - (hi - lo);
        case 12:
        case 13: {
            const int block_lo = std::min(static_cast<int>(std::floor(2.0 * lo)), 1);
            const int block_hi = std::min(static_cast<int>(std::floor(2.0 * hi)), 1);
            const bool same = block_lo == block_hi;
            return (id == 12) == same ? 0.8 : 0.0;
        }
        default: return 0.0;
    }
}

}  // namespace

Graphon::Graphon(Kind kind) : kind_(std::move(kind)) {}

double Graphon::eval_unchecked(double x, double y) const noexcept {
    const double lo = std::min(x, y);
    const double hi = std::max(x, y);
    return std::visit(
        [&](const auto& k) -> double {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, Analytic>) {
                return analytic_kernel(k.id, lo, hi);
            } else if constexpr (std::is_same_v<T, Constant>) {
                return k.p;
            } else if constexpr (std::is_same_v<T, Cosine>) {
                return 0.5 + 0.1 * std::cos(std::numbers::pi * lo) * std::cos(std::numbers::pi * hi);
            } else if constexpr (std::is_same_v<T, Step>) {
                const std::size_t r = k.grid->resolution();
                const auto cell = [r](double t) {
                    return std::min(static_cast<std::size_t>(t * static_cast<double>(r)), r - 1);
                };
                return (*k.grid)(cell(lo), cell(hi));
            } else {
                return forward_unchecked(*k.params, lo, hi);
            }
        },
        kind_);
}

double Graphon::operator()(double x, double y) const {
    if (!(x >= 0.0 && x <= 1.0 && y >= 0.0 && y <= 1.0)) {
        throw DomainError("graphon evaluated outside [0,1]^2 at (" + std::to_string(x) + ", " + std::to_string(y) +
                          ")");
    }
    return eval_unchecked(x, y);
}

std::string Graphon::describe() const {
    return std::visit(
        [](const auto& k) -> std::string {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, Analytic>) {
                return "analytic:" + std::to_string(k.id);
            } else if constexpr (std::is_same_v<T, Constant>) {
                char buf[32];
                auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, k.p);
                return "constant:" + std::string(buf, ptr);
            } else if constexpr (std::is_same_v<T, Cosine>) {
                return "cosine";
            } else if constexpr (std::is_same_v<T, Step>) {
                return "grid(R=" + std::to_string(k.grid->resolution()) + ")";
            } else {
                return "model(H=" + std::to_string(k.params->hidden()) + ")";
            }
        },
        kind_);
}

Graphon analytic_graphon(int id) {
    if (id < 1 || id > 13) throw DomainError("analytic graphon id must be in 1..13, got " + std::to_string(id));
    return Graphon(Graphon::Analytic{id});
}

Graphon constant_graphon(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("constant graphon value must be in [0,1]");
    return Graphon(Graphon::Constant{p});
}

Graphon cosine_graphon() { return Graphon(Graphon::Cosine{}); }

Graphon grid_graphon(Grid grid) {
    if (grid.resolution() == 0) throw DomainError("empty grid");
    return Graphon(Graphon::Step{std::make_shared<const Grid>(std::move(grid))});
}

Graphon model_graphon(InrParams params) {
    return Graphon(Graphon::Model{std::make_shared<const InrParams>(std::move(params))});
}

Grid discretize(const Graphon& w, std::size_t resolution) {
    if (resolution == 0) throw DomainError("discretize needs a positive resolution");
    const double r = static_cast<double>(resolution);
    std::vector<double> values(resolution * resolution);
    for (std::size_t i = 0; i < resolution; ++i) {
        const double x = (static_cast<double>(i) + 0.5) / r;
        for (std::size_t j = i; j < resolution; ++j) {
            const double y = (static_cast<double>(j) + 0.5) / r;
            const double v = w.eval_unchecked(x, y);
            values[i * resolution + j] = v;
            values[j * resolution + i] = v;
        }
    }
    return Grid(resolution, std::move(values));
}

Graphon parse_graphon_spec(std::string_view spec) {
    auto colon = spec.find(':');
    const auto head = spec.substr(0, colon);
    const auto tail = colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);
    if (head == "constant") {
        double p = 0;
        auto [ptr, ec] = std::from_chars(tail.data(), tail.data() + tail.size(), p);
        if (ec != std::errc{} || ptr != tail.data() + tail.size()) {
            throw ParseError(0, "invalid constant graphon '" + std::string(spec) + "'");
        }
        return constant_graphon(p);
    }
    if (head == "cosine" && tail.empty()) return cosine_graphon();
    if (head == "grid") return grid_graphon(parse_grid_csv(read_text_file(std::string(tail))));
    if (head == "model") return model_graphon(parse_model(read_text_file(std::string(tail))));
    int id = 0;
    auto [ptr, ec] = std::from_chars(spec.data(), spec.data() + spec.size(), id);
    if (ec != std::errc{} || ptr != spec.data() + spec.size()) {
        throw ParseError(0, "unrecognized graphon spec '" + std::string(spec) + "'");
    }
    return analytic_graphon(id);
}

MomentVector quadrature_moments(const Graphon& w, std::size_t resolution) {
    if (resolution == 0) throw DomainError("quadrature needs a positive resolution");
    const std::size_t q = resolution;
    const auto grid = discretize(w, q);
    std::array<double, kNumMotifs> sums{};
    std::array<double, 6> f;
    for (std::size_t a = 0; a < q; ++a) {
        for (std::size_t b = 0; b < q; ++b) {
            f[0] = grid(a, b);
            for (std::size_t c = 0; c < q; ++c) {
                f[1] = grid(a, c);
                f[3] = grid(b, c);
                std::array<double, kNumMotifs> inner{};
                for (std::size_t d = 0; d < q; ++d) {
                    f[2] = grid(a, d);
                    f[4] = grid(b, d);
                    f[5] = grid(c, d);
                    const auto v = tuple_motif_values(f);
                    for (std::size_t m = 0; m < kNumMotifs; ++m) inner[m] += v[m];
                }
                for (std::size_t m = 0; m < kNumMotifs; ++m) sums[m] += inner[m];
            }
        }
    }
    MomentVector out;
    const double volume = std::pow(static_cast<double>(q), 4);
    for (std::size_t m = 0; m < kNumMotifs; ++m) out[m] = std::clamp(sums[m] / volume, 0.0, 1.0);
    out.provenance = Provenance::exact(q);
    return out;
}

MomentVector mc_moments(const Graphon& w, std::size_t samples, std::uint64_t seed) {
    if (samples == 0) throw DomainError("mc_moments needs at least one sample");
    std::array<double, kNumMotifs> sums{};
    for (std::size_t l = 0; l < samples; ++l) {
        std::array<double, 4> t;
        for (std::size_t c = 0; c < 4; ++c) t[c] = SplitMix64::uniform_at(seed, 4 * l + c);
        std::array<double, 6> f;
        for (int p = 0; p < 6; ++p) f[p] = w.eval_unchecked(t[kTuplePairs[p].first], t[kTuplePairs[p].second]);
        const auto v = tuple_motif_values(f);
        for (std::size_t m = 0; m < kNumMotifs; ++m) sums[m] += v[m];
    }
    MomentVector out;
    for (std::size_t m = 0; m < kNumMotifs; ++m) out[m] = sums[m] / static_cast<double>(samples);
    out.provenance = Provenance::model(samples);
    return out;
}

}  // namespace momentnet
