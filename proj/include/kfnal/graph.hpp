#pragma once

#include <algorithm>
#include <cctype>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kfnal {

/// Simple undirected graph: 1-based vertex ids, edges stored with i < j in
/// lexicographic order, no self-loops, no duplicates.
struct Graph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;
  bool connected = false;

  int d() const { return static_cast<int>(edges.size()); }
};

namespace detail {

inline bool compute_connected(int n, const std::vector<std::pair<int, int>>& edges) {
  std::vector<int> parent(n + 1);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&parent](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& [i, j] : edges) parent[find(i)] = find(j);
  for (int v = 2; v <= n; ++v)
    if (find(v) != find(1)) return false;
  return true;
}

}  // namespace detail

/// Normalizes edge pairs (dedup, sort, i < j), validates ids, and records
/// connectivity. Self-loops are rejected here; file loaders drop them before
/// calling.
inline Graph make_graph(int n, const std::vector<std::pair<int, int>>& raw) {
  if (n < 1) throw std::invalid_argument("make_graph: vertex count must be >= 1");
  std::set<std::pair<int, int>> dedup;
  for (auto [i, j] : raw) {
    if (i == j) throw std::invalid_argument("make_graph: self-loop");
    if (i > j) std::swap(i, j);
    if (i < 1 || j > n) throw std::invalid_argument("make_graph: vertex id out of range");
    dedup.insert({i, j});
  }
  if (dedup.empty()) throw std::invalid_argument("make_graph: graph has no edges");
  Graph g;
  g.n = n;
  g.edges.assign(dedup.begin(), dedup.end());
  g.connected = detail::compute_connected(n, g.edges);
  return g;
}

enum class GraphFormat { matrix_market, edge_list };

namespace detail {

[[noreturn]] inline void format_error(const std::string& what, int line) {
  throw std::runtime_error("graph parse error at line " + std::to_string(line) + ": " + what);
}

}  // namespace detail

/// Edge-list text: one "i j" pair per line, 1-based, '#' starts a comment.
/// The vertex count is the largest id seen.
inline Graph parse_edge_list(std::istream& in) {
  std::vector<std::pair<int, int>> edges;
  int n = 0, lineno = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    long i, j;
    if (!(ls >> i)) continue;  // blank or comment-only line
    if (!(ls >> j)) detail::format_error("expected two vertex ids", lineno);
    if (i < 1 || j < 1) detail::format_error("vertex ids must be positive", lineno);
    if (i == j) continue;  // ignore self-loops
    n = std::max(n, static_cast<int>(std::max(i, j)));
    edges.emplace_back(static_cast<int>(i), static_cast<int>(j));
  }
  if (edges.empty()) throw std::invalid_argument("edge list describes an empty graph");
  return make_graph(n, edges);
}

/// Matrix Market coordinate format, structure only: values are ignored,
/// symmetric duplicates are merged and diagonal entries dropped.
inline Graph parse_matrix_market(std::istream& in) {
  std::string line;
  int lineno = 0;
  bool banner_checked = false;
  long rows = -1, cols = -1, nnz = -1;
  std::vector<std::pair<int, int>> edges;
  long seen = 0;

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line[0] == '%') {
      if (!banner_checked && line.rfind("%%MatrixMarket", 0) == 0) {
        std::istringstream bs(line);
        std::string tag, object, format;
        bs >> tag >> object >> format;
        std::transform(object.begin(), object.end(), object.begin(), ::tolower);
        std::transform(format.begin(), format.end(), format.begin(), ::tolower);
        if (object != "matrix" || format != "coordinate")
          detail::format_error("expected a coordinate matrix", lineno);
      }
      banner_checked = true;
      continue;
    }
    std::istringstream ls(line);
    if (rows < 0) {
      if (!(ls >> rows >> cols >> nnz)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        detail::format_error("expected 'rows cols nnz'", lineno);
      }
      if (rows != cols) detail::format_error("matrix must be square", lineno);
      if (rows < 1) detail::format_error("matrix order must be >= 1", lineno);
      continue;
    }
    long i, j;
    if (!(ls >> i >> j)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      detail::format_error("expected 'i j [value]'", lineno);
    }
    ++seen;
    if (i < 1 || j < 1 || i > rows || j > rows)
      detail::format_error("entry index out of range", lineno);
    if (i == j) continue;  // diagonal entries carry no edge
    edges.emplace_back(static_cast<int>(i), static_cast<int>(j));
  }
  if (rows < 0) throw std::runtime_error("graph parse error at line 1: empty file");
  if (nnz >= 0 && seen != nnz)
    detail::format_error("entry count " + std::to_string(seen) + " does not match header " +
                             std::to_string(nnz),
                         lineno + 1);
  if (edges.empty()) throw std::invalid_argument("matrix describes an empty graph");
  return make_graph(static_cast<int>(rows), edges);
}

inline Graph load_graph(const std::string& path, GraphFormat format) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph file: " + path);
  return format == GraphFormat::matrix_market ? parse_matrix_market(in) : parse_edge_list(in);
}

inline void save_edge_list(const Graph& g, std::ostream& out) {
  for (const auto& [i, j] : g.edges) out << i << ' ' << j << '\n';
}

inline void save_edge_list(const Graph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open file for writing: " + path);
  save_edge_list(g, out);
}

inline Graph make_path(int n) {
  if (n < 2) throw std::invalid_argument("path graph needs n >= 2");
  std::vector<std::pair<int, int>> e;
  for (int v = 1; v < n; ++v) e.emplace_back(v, v + 1);
  return make_graph(n, e);
}

inline Graph make_cycle(int n) {
  if (n < 2) throw std::invalid_argument("cycle graph needs n >= 2");
  std::vector<std::pair<int, int>> e;
  for (int v = 1; v < n; ++v) e.emplace_back(v, v + 1);
  if (n > 2) e.emplace_back(1, n);
  return make_graph(n, e);
}

inline Graph make_star(int n) {
  if (n < 2) throw std::invalid_argument("star graph needs n >= 2");
  std::vector<std::pair<int, int>> e;
  for (int v = 2; v <= n; ++v) e.emplace_back(1, v);
  return make_graph(n, e);
}

/// m-by-m lattice with horizontal and vertical nearest-neighbor edges.
inline Graph make_grid(int m) {
  if (m < 2) throw std::invalid_argument("grid graph needs side >= 2");
  auto id = [m](int r, int c) { return r * m + c + 1; };
  std::vector<std::pair<int, int>> e;
  for (int r = 0; r < m; ++r) {
    for (int c = 0; c < m; ++c) {
      if (c + 1 < m) e.emplace_back(id(r, c), id(r, c + 1));
      if (r + 1 < m) e.emplace_back(id(r, c), id(r + 1, c));
    }
  }
  return make_graph(m * m, e);
}

}  // namespace kfnal
