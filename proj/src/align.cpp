#include "gec/align.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace gec::align {

namespace {

bool topo_less(const Cell& a, const Cell& b) {
  if (a.i + a.j != b.i + b.j) return a.i + a.j < b.i + b.j;
  return a.i < b.i;
}

constexpr int kUnreached = std::numeric_limits<int>::max();

}  // namespace

LevMatrix::LevMatrix(std::span<const std::string> source, std::span<const std::string> target)
    : rows_(source.size() + 1), cols_(target.size() + 1), cells_(rows_ * cols_, 0),
      equal_(source.size() * target.size(), 0) {
  for (std::size_t i = 0; i < source.size(); ++i) {
    for (std::size_t j = 0; j < target.size(); ++j) {
      equal_[i * target.size() + j] = source[i] == target[j] ? 1 : 0;
    }
  }
  for (std::size_t j = 0; j < cols_; ++j) cells_[j] = static_cast<int>(j);
  for (std::size_t i = 1; i < rows_; ++i) {
    cells_[i * cols_] = static_cast<int>(i);
    for (std::size_t j = 1; j < cols_; ++j) {
      int diag = at(i - 1, j - 1) + (tokens_equal(i, j) ? 0 : 1);
      int up = at(i - 1, j) + 1;
      int left = at(i, j - 1) + 1;
      cells_[i * cols_ + j] = std::min({diag, up, left});
    }
  }
}

std::vector<Cell> LevMatrix::optimal_predecessors(Cell cell) const {
  std::vector<Cell> preds;
  const int here = at(cell.i, cell.j);
  if (cell.i > 0 && cell.j > 0 && at(cell.i - 1, cell.j - 1) + (tokens_equal(cell.i, cell.j) ? 0 : 1) == here) {
    preds.push_back({cell.i - 1, cell.j - 1});
  }
  if (cell.i > 0 && at(cell.i - 1, cell.j) + 1 == here) preds.push_back({cell.i - 1, cell.j});
  if (cell.j > 0 && at(cell.i, cell.j - 1) + 1 == here) preds.push_back({cell.i, cell.j - 1});
  return preds;
}

LevMatrix lev_matrix(std::span<const std::string> source, std::span<const std::string> target) {
  return LevMatrix(source, target);
}

std::set<Cell> shortest_path_cells(const LevMatrix& matrix) {
  std::set<Cell> seen;
  std::deque<Cell> queue;
  Cell corner{matrix.rows() - 1, matrix.cols() - 1};
  seen.insert(corner);
  queue.push_back(corner);
  while (!queue.empty()) {
    Cell cell = queue.front();
    queue.pop_front();
    for (Cell pred : matrix.optimal_predecessors(cell)) {
      if (seen.insert(pred).second) queue.push_back(pred);
    }
  }
  return seen;
}

OpKind LatticeEdge::atomic_kind() const {
  if (source_phrase.empty()) return OpKind::Insert;
  if (target_phrase.empty()) return OpKind::Delete;
  return source_phrase == target_phrase ? OpKind::Match : OpKind::Substitute;
}

EditLattice::EditLattice(std::vector<Cell> vertices, std::vector<LatticeEdge> edges)
    : vertices_(std::move(vertices)), edges_(std::move(edges)), out_(vertices_.size()) {
  std::sort(vertices_.begin(), vertices_.end(), topo_less);
  std::sort(edges_.begin(), edges_.end(), [](const LatticeEdge& a, const LatticeEdge& b) {
    if (a.from != b.from) return topo_less(a.from, b.from);
    return topo_less(a.to, b.to);
  });
  for (std::size_t e = 0; e < edges_.size(); ++e) out_[vertex_index(edges_[e].from)].push_back(e);
}

std::size_t EditLattice::vertex_index(Cell cell) const {
  auto it = std::lower_bound(vertices_.begin(), vertices_.end(), cell, topo_less);
  if (it == vertices_.end() || *it != cell) {
    throw std::out_of_range("cell (" + std::to_string(cell.i) + "," + std::to_string(cell.j) +
                            ") is not a lattice vertex");
  }
  return static_cast<std::size_t>(it - vertices_.begin());
}

const LatticeEdge* EditLattice::find_edge(Cell from, Cell to) const {
  auto it = std::lower_bound(vertices_.begin(), vertices_.end(), from, topo_less);
  if (it == vertices_.end() || *it != from) return nullptr;
  for (std::size_t e : out_[static_cast<std::size_t>(it - vertices_.begin())]) {
    if (edges_[e].to == to) return &edges_[e];
  }
  return nullptr;
}

EditLattice build_lattice(std::span<const std::string> source, std::span<const std::string> target,
                          int max_unchanged) {
  if (max_unchanged < 0) throw std::invalid_argument("max_unchanged must be >= 0");
  const LevMatrix matrix(source, target);
  const std::set<Cell> on_path = shortest_path_cells(matrix);
  std::vector<Cell> vertices(on_path.begin(), on_path.end());
  std::sort(vertices.begin(), vertices.end(), topo_less);

  auto phrase = [](std::span<const std::string> tokens, std::size_t begin, std::size_t end) {
    return Tokens(tokens.begin() + static_cast<std::ptrdiff_t>(begin), tokens.begin() + static_cast<std::ptrdiff_t>(end));
  };

  // Atomic steps: every optimal predecessor of an on-path cell is on-path too.
  std::vector<LatticeEdge> atomic;
  for (Cell to : vertices) {
    for (Cell from : matrix.optimal_predecessors(to)) {
      LatticeEdge edge;
      edge.from = from;
      edge.to = to;
      edge.source_phrase = phrase(source, from.i, to.i);
      edge.target_phrase = phrase(target, from.j, to.j);
      edge.cost = 1;
      edge.unchanged = edge.is_change() ? 0 : 1;
      edge.atomic = true;
      atomic.push_back(std::move(edge));
    }
  }

  std::map<Cell, std::vector<const LatticeEdge*>> atomic_out;
  for (const LatticeEdge& edge : atomic) atomic_out[edge.from].push_back(&edge);

  // For each start vertex, fewest steps to every reachable vertex for each
  // count of matched tokens 0..max_unchanged along the way.
  const auto slots = static_cast<std::size_t>(max_unchanged) + 1;
  std::vector<LatticeEdge> transitive;
  for (Cell start : vertices) {
    std::map<Cell, std::vector<int>, decltype(&topo_less)> frontier(topo_less);
    frontier[start] = std::vector<int>(slots, kUnreached);
    frontier[start][0] = 0;
    while (!frontier.empty()) {
      auto node = frontier.extract(frontier.begin());
      const Cell here = node.key();
      const std::vector<int>& best = node.mapped();

      if (here != start) {
        int steps = kUnreached;
        int matched = 0;
        for (std::size_t k = 0; k < slots; ++k) {
          if (best[k] < steps) {
            steps = best[k];
            matched = static_cast<int>(k);
          }
        }
        bool changed = matrix.at(here.i, here.j) > matrix.at(start.i, start.j);
        if (steps >= 2 && changed) {
          LatticeEdge edge;
          edge.from = start;
          edge.to = here;
          edge.source_phrase = phrase(source, start.i, here.i);
          edge.target_phrase = phrase(target, start.j, here.j);
          edge.cost = steps;
          edge.unchanged = matched;
          edge.atomic = false;
          transitive.push_back(std::move(edge));
        }
      }

      auto out = atomic_out.find(here);
      if (out == atomic_out.end()) continue;
      for (const LatticeEdge* step : out->second) {
        const std::size_t extra = step->is_change() ? 0 : 1;
        for (std::size_t k = 0; k + extra < slots; ++k) {
          if (best[k] == kUnreached) continue;
          auto [slot, inserted] = frontier.try_emplace(step->to);
          if (inserted) slot->second.assign(slots, kUnreached);
          slot->second[k + extra] = std::min(slot->second[k + extra], best[k] + 1);
        }
      }
    }
  }

  std::vector<LatticeEdge> edges = std::move(atomic);
  edges.insert(edges.end(), std::make_move_iterator(transitive.begin()), std::make_move_iterator(transitive.end()));
  return EditLattice(std::move(vertices), std::move(edges));
}

std::string dump_lattice(const EditLattice& lattice) {
  auto show = [](const Tokens& tokens) { return tokens.empty() ? std::string("\xE2\x88\x85") : join_tokens(tokens); };
  std::ostringstream out;
  for (const LatticeEdge& edge : lattice.edges()) {
    out << edge.from.i << ',' << edge.from.j << " -> " << edge.to.i << ',' << edge.to.j << " : \""
        << show(edge.source_phrase) << " / " << show(edge.target_phrase) << "\" (" << edge.cost << ")\n";
  }
  return out.str();
}

}  // namespace gec::align
