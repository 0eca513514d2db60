#pragma once

#include <compare>
#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "gec/text.hpp"

namespace gec::align {

/// A cell of the edit-distance matrix: `i` source tokens consumed, `j` target tokens.
struct Cell {
  std::size_t i = 0;
  std::size_t j = 0;

  auto operator<=>(const Cell&) const = default;
};

/// Token-level Levenshtein matrix with unit insertion, deletion and
/// substitution costs. Token comparison is exact and case-sensitive.
class LevMatrix {
 public:
  LevMatrix(std::span<const std::string> source, std::span<const std::string> target);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  int at(std::size_t i, std::size_t j) const { return cells_[i * cols_ + j]; }
  int distance() const { return cells_.back(); }
  /// True when source[i-1] == target[j-1]; requires i, j >= 1.
  bool tokens_equal(std::size_t i, std::size_t j) const { return equal_[(i - 1) * (cols_ - 1) + (j - 1)] != 0; }

  /// Predecessors of `cell` that lie on some cheapest route into it.
  std::vector<Cell> optimal_predecessors(Cell cell) const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<int> cells_;
  std::vector<unsigned char> equal_;
};

LevMatrix lev_matrix(std::span<const std::string> source, std::span<const std::string> target);

/// Cells on at least one minimal edit path from (0,0) to the bottom-right
/// corner, found by a breadth-first walk back from the corner.
std::set<Cell> shortest_path_cells(const LevMatrix& matrix);

enum class OpKind { Match, Substitute, Insert, Delete };

/// One edge of the lattice. Atomic edges are a single Levenshtein step;
/// transitive edges chain several consecutive steps and carry the combined
/// source and target phrases.
struct LatticeEdge {
  Cell from;
  Cell to;
  Tokens source_phrase;
  Tokens target_phrase;
  int cost = 0;       // number of atomic steps, each of unit cost
  int unchanged = 0;  // matched tokens inside the edge
  bool atomic = true;

  /// False only for a single Match step.
  bool is_change() const { return source_phrase != target_phrase; }
  OpKind atomic_kind() const;
};

/// DAG over shortest-path cells whose source-to-sink paths are exactly the
/// minimal edit sequences, possibly grouped into phrase-level edits.
class EditLattice {
 public:
  EditLattice() = default;
  EditLattice(std::vector<Cell> vertices, std::vector<LatticeEdge> edges);

  /// Vertices in topological order: ascending i+j, then i.
  const std::vector<Cell>& vertices() const { return vertices_; }
  const std::vector<LatticeEdge>& edges() const { return edges_; }
  /// Indices into edges() of the edges leaving vertex `v` (an index into vertices()).
  const std::vector<std::size_t>& out_edges(std::size_t v) const { return out_[v]; }
  std::size_t vertex_index(Cell cell) const;
  std::size_t source_vertex() const { return 0; }
  std::size_t sink_vertex() const { return vertices_.size() - 1; }
  /// Returns nullptr if there is no edge between the two cells.
  const LatticeEdge* find_edge(Cell from, Cell to) const;

 private:
  std::vector<Cell> vertices_;
  std::vector<LatticeEdge> edges_;
  std::vector<std::vector<std::size_t>> out_;
};

/// Builds the lattice for (source, target). Besides the atomic steps it adds
/// one transitive edge for every pair of vertices joined by a multi-step
/// route that contains at least one change and at most `max_unchanged`
/// matched tokens; its cost is the fewest steps among such routes.
EditLattice build_lattice(std::span<const std::string> source, std::span<const std::string> target,
                          int max_unchanged);

/// Text edge list, one `i,j -> k,l : "src / tgt" (cost)` line per edge.
std::string dump_lattice(const EditLattice& lattice);

}  // namespace gec::align
