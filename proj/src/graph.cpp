#include "momentnet/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>

#include "momentnet/errors.hpp"
#include "momentnet/graphon.hpp"
#include "momentnet/rng.hpp"

namespace momentnet {

Graph::Graph(std::size_t n, std::span<const Edge> edges) : adjacency_(n) {
    for (auto [u, v] : edges) {
        if (u >= n || v >= n) {
            throw ValidationError("edge (" + std::to_string(u) + ", " + std::to_string(v) +
                                  ") out of range for n = " + std::to_string(n));
        }
        if (u == v) throw ValidationError("self-loop at vertex " + std::to_string(u));
        adjacency_[u].push_back(v);
        adjacency_[v].push_back(u);
    }
    for (auto& list : adjacency_) std::sort(list.begin(), list.end());
    for (Vertex v = 0; v < n; ++v) {
        const auto& list = adjacency_[v];
        auto dup = std::adjacent_find(list.begin(), list.end());
        if (dup != list.end()) {
            throw ValidationError("duplicate edge (" + std::to_string(std::min(v, *dup)) + ", " +
                                  std::to_string(std::max(v, *dup)) + ")");
        }
    }
    num_edges_ = edges.size();
}

Graph Graph::from_adjacency(std::vector<std::vector<Vertex>> adjacency) {
    Graph g;
    g.adjacency_ = std::move(adjacency);
    std::size_t endpoints = 0;
    for (auto& list : g.adjacency_) {
        std::sort(list.begin(), list.end());
        endpoints += list.size();
    }
    g.num_edges_ = endpoints / 2;
    g.validate();
    return g;
}

bool Graph::has_edge(Vertex u, Vertex v) const {
    const auto& list = adjacency_[u];
    return std::binary_search(list.begin(), list.end(), v);
}

std::vector<Edge> Graph::edges() const {
    std::vector<Edge> out;
    out.reserve(num_edges_);
    for (Vertex u = 0; u < adjacency_.size(); ++u) {
        for (Vertex v : adjacency_[u]) {
            if (u < v) out.emplace_back(u, v);
        }
    }
    return out;
}

void Graph::validate() const {
    const std::size_t n = adjacency_.size();
    std::size_t endpoints = 0;
    for (Vertex u = 0; u < n; ++u) {
        const auto& list = adjacency_[u];
        endpoints += list.size();
        for (std::size_t i = 0; i < list.size(); ++i) {
            const Vertex v = list[i];
            if (v >= n) throw ValidationError("neighbor " + std::to_string(v) + " out of range");
            if (v == u) throw ValidationError("self-loop at vertex " + std::to_string(u));
            if (i > 0 && list[i - 1] >= v) throw ValidationError("adjacency of " + std::to_string(u) +
                                                                 " not strictly sorted");
            if (!has_edge(v, u)) throw ValidationError("asymmetric adjacency between " + std::to_string(u) +
                                                       " and " + std::to_string(v));
        }
    }
    if (endpoints != 2 * num_edges_) throw ValidationError("edge count mismatch");
}

double Graph::edge_density() const {
    const double n = static_cast<double>(num_vertices());
    return n < 2 ? 0.0 : static_cast<double>(num_edges_) / (n * (n - 1) / 2);
}

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

std::uint64_t parse_index(std::string_view token, std::size_t line) {
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size()) {
        throw ParseError(line, "expected a non-negative integer, got '" + std::string(token) + "'");
    }
    if (value > 0xFFFFFFFEULL) throw ParseError(line, "vertex index too large");
    return value;
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        ++line_no;
        fn(trim(text.substr(pos, end - pos)), line_no);
        pos = end + 1;
    }
}

}  // namespace

Graph parse_edge_list(std::string_view text) {
    std::vector<Edge> edges;
    std::optional<std::size_t> header_n;
    std::size_t inferred_n = 0;

    for_each_line(text, [&](std::string_view line, std::size_t line_no) {
        if (line.empty() || line.front() == '#') return;
        const auto tokens = split_ws(line);
        if (tokens.size() == 2 && tokens[0] == "n") {
            if (header_n) throw ParseError(line_no, "duplicate 'n' header");
            header_n = parse_index(tokens[1], line_no);
            return;
        }
        if (tokens.size() != 2) throw ParseError(line_no, "expected 'u v', got '" + std::string(line) + "'");
        const auto u = parse_index(tokens[0], line_no);
        const auto v = parse_index(tokens[1], line_no);
        if (u == v) throw ValidationError("line " + std::to_string(line_no) + ": self-loop at vertex " +
                                          std::to_string(u));
        edges.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
        inferred_n = std::max<std::size_t>(inferred_n, std::max(u, v) + 1);
    });

    const std::size_t n = header_n.value_or(inferred_n);
    if (header_n && inferred_n > *header_n) {
        throw ValidationError("vertex index " + std::to_string(inferred_n - 1) + " exceeds header n = " +
                              std::to_string(*header_n));
    }
    return Graph(n, edges);
}

std::string write_edge_list(const Graph& g) {
    std::string out = "n " + std::to_string(g.num_vertices());
    for (auto [u, v] : g.edges()) {
        out += '\n';
        out += std::to_string(u);
        out += ' ';
        out += std::to_string(v);
    }
    return out;
}

SampledGraph sample_graph(const Graphon& w, std::size_t n, std::uint64_t seed) {
    SplitMix64 rng(seed);
    SampledGraph out;
    out.seed = seed;
    out.latents.resize(n);
    for (auto& eta : out.latents) eta = rng.uniform();

    std::vector<std::vector<Vertex>> adjacency(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double u = rng.uniform();
            if (u < w.eval_unchecked(out.latents[i], out.latents[j])) {
                adjacency[i].push_back(static_cast<Vertex>(j));
                adjacency[j].push_back(static_cast<Vertex>(i));
            }
        }
    }
    out.graph = Graph::from_adjacency(std::move(adjacency));
    return out;
}

std::vector<double> parse_latents(std::string_view text) {
    std::vector<double> out;
    for_each_line(text, [&](std::string_view line, std::size_t line_no) {
        if (line.empty() || line.front() == '#') return;
        double value = 0;
        auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), value);
        if (ec != std::errc{} || ptr != line.data() + line.size()) {
            throw ParseError(line_no, "expected a real number, got '" + std::string(line) + "'");
        }
        if (!(value >= 0.0 && value <= 1.0)) throw ValidationError("latent outside [0,1] on line " +
                                                                   std::to_string(line_no));
        out.push_back(value);
    });
    return out;
}

std::string write_latents(std::span<const double> latents) {
    std::string out;
    char buf[32];
    for (double x : latents) {
        auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
        out.append(buf, ptr);
        out += '\n';
    }
    return out;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::vector<DatasetEntry> load_dataset(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) throw std::runtime_error(dir.string() + " is not a directory");
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".edges") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());

    std::vector<DatasetEntry> out;
    out.reserve(files.size());
    for (const auto& path : files) {
        DatasetEntry entry;
        entry.path = path;
        try {
            entry.graph = parse_edge_list(read_text_file(path));
            auto latents_path = path;
            latents_path.replace_extension(".latents");
            if (std::filesystem::exists(latents_path)) {
                entry.latents = parse_latents(read_text_file(latents_path));
                if (entry.latents.size() != entry.graph.num_vertices()) {
                    throw ValidationError("latent count does not match vertex count");
                }
            }
        } catch (const std::exception& e) {
            throw std::runtime_error(path.filename().string() + ": " + e.what());
        }
        out.push_back(std::move(entry));
    }
    return out;
}

}  // namespace momentnet
