#include <random>

#include "doctest.h"
#include "gec/align.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace gec::align;
using testing::toks;

namespace {

const gec::Tokens kSource = toks("the greater the Levenshtein distances , more different strings are .");
const gec::Tokens kTarget = toks("the greater the Levenshtein distances , the more different strings are .");
const gec::Tokens kAlphabet{"a", "b", "c"};

std::set<oracle::CellPair> as_pairs(const std::set<Cell>& cells) {
  std::set<oracle::CellPair> out;
  for (Cell c : cells) out.insert({c.i, c.j});
  return out;
}

// Every source-to-sink path of the lattice, as the concatenated target phrases.
void collect_outputs(const EditLattice& lattice, std::size_t v, gec::Tokens& prefix, std::vector<gec::Tokens>& out,
                     std::size_t limit) {
  if (out.size() >= limit) return;
  if (v == lattice.sink_vertex()) {
    out.push_back(prefix);
    return;
  }
  for (std::size_t e : lattice.out_edges(v)) {
    const LatticeEdge& edge = lattice.edges()[e];
    const std::size_t keep = prefix.size();
    prefix.insert(prefix.end(), edge.target_phrase.begin(), edge.target_phrase.end());
    collect_outputs(lattice, lattice.vertex_index(edge.to), prefix, out, limit);
    prefix.resize(keep);
  }
}

}  // namespace

TEST_SUITE("align") {
  TEST_CASE("distance matrix of the worked example") {
    LevMatrix matrix(kSource, kTarget);
    CHECK(matrix.rows() == 12);
    CHECK(matrix.cols() == 13);
    CHECK(matrix.distance() == 1);
    CHECK(matrix.at(0, 0) == 0);
    CHECK(matrix.at(6, 6) == 0);
    CHECK(matrix.at(6, 7) == 1);
    CHECK(matrix.at(11, 0) == 11);
    CHECK(matrix.at(0, 12) == 12);
  }

  TEST_CASE("shortest-path cells of the worked example") {
    std::set<Cell> expected;
    for (std::size_t k = 0; k <= 6; ++k) expected.insert({k, k});
    expected.insert({6, 7});
    for (std::size_t k = 7; k <= 11; ++k) expected.insert({k, k + 1});
    CHECK(shortest_path_cells(lev_matrix(kSource, kTarget)) == expected);
  }

  TEST_CASE("lattice of the worked example holds the expected phrase edges") {
    EditLattice lattice = build_lattice(kSource, kTarget, 2);
    const LatticeEdge* insert_the = lattice.find_edge({6, 6}, {6, 7});
    REQUIRE(insert_the != nullptr);
    CHECK(insert_the->atomic);
    CHECK(insert_the->atomic_kind() == OpKind::Insert);

    const LatticeEdge* more = lattice.find_edge({6, 6}, {7, 8});
    REQUIRE(more != nullptr);
    CHECK(more->source_phrase == toks("more"));
    CHECK(more->target_phrase == toks("the more"));
    CHECK(more->cost == 2);
    CHECK_FALSE(more->atomic);

    const LatticeEdge* longer = lattice.find_edge({6, 6}, {8, 9});
    REQUIRE(longer != nullptr);
    CHECK(longer->cost == 3);
    CHECK(longer->unchanged == 2);

    // Three matched tokens exceed the threshold.
    CHECK(lattice.find_edge({6, 6}, {9, 10}) == nullptr);
    // Pure matches never merge.
    CHECK(lattice.find_edge({0, 0}, {2, 2}) == nullptr);
    CHECK(lattice.find_edge({0, 0}, {1, 1}) != nullptr);
  }

  TEST_CASE("dump lists one line per edge") {
    EditLattice lattice = build_lattice(toks("a"), toks("b"), 2);
    std::string dump = dump_lattice(lattice);
    CHECK(dump == "0,0 -> 1,1 : \"a / b\" (1)\n");
    EditLattice del = build_lattice(toks("a"), gec::Tokens{}, 2);
    CHECK(dump_lattice(del) == "0,0 -> 1,0 : \"a / ∅\" (1)\n");
  }

  TEST_CASE("distance and cells agree with exhaustive path enumeration") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 400; ++trial) {
      auto a = oracle::random_tokens(rng, 5, kAlphabet);
      auto b = oracle::random_tokens(rng, 5, kAlphabet);
      LevMatrix matrix(a, b);
      CHECK(matrix.distance() == oracle::edit_distance(a, b));
      CHECK(as_pairs(shortest_path_cells(matrix)) == oracle::minimal_path_cells(a, b));
    }
  }

  TEST_CASE("lattice edges and costs agree with window enumeration over minimal paths") {
    std::mt19937 rng(12);
    for (int trial = 0; trial < 400; ++trial) {
      auto a = oracle::random_tokens(rng, 5, kAlphabet);
      auto b = oracle::random_tokens(rng, 5, kAlphabet);
      for (int u : {0, 1, 2, 3}) {
        EditLattice lattice = build_lattice(a, b, u);
        std::map<std::pair<oracle::CellPair, oracle::CellPair>, int> got;
        for (const LatticeEdge& e : lattice.edges()) got[{{e.from.i, e.from.j}, {e.to.i, e.to.j}}] = e.cost;
        CHECK(got == oracle::lattice_edges(a, b, u));
      }
    }
  }

  TEST_CASE("edit distance is a metric on short sequences") {
    std::mt19937 rng(13);
    for (int trial = 0; trial < 300; ++trial) {
      auto a = oracle::random_tokens(rng, 6, kAlphabet);
      auto b = oracle::random_tokens(rng, 6, kAlphabet);
      auto c = oracle::random_tokens(rng, 6, kAlphabet);
      const int ab = LevMatrix(a, b).distance();
      CHECK(ab == LevMatrix(b, a).distance());
      CHECK(LevMatrix(a, a).distance() == 0);
      CHECK(LevMatrix(a, c).distance() <= ab + LevMatrix(b, c).distance());
      CHECK(ab >= static_cast<int>(a.size() > b.size() ? a.size() - b.size() : b.size() - a.size()));
    }
  }

  TEST_CASE("every lattice path spells the target") {
    std::mt19937 rng(14);
    for (int trial = 0; trial < 200; ++trial) {
      auto a = oracle::random_tokens(rng, 6, kAlphabet);
      auto b = oracle::random_tokens(rng, 6, kAlphabet);
      EditLattice lattice = build_lattice(a, b, 2);
      CHECK(lattice.vertices().front() == Cell{0, 0});
      CHECK(lattice.vertices().back() == Cell{a.size(), b.size()});
      std::vector<gec::Tokens> outputs;
      gec::Tokens prefix;
      collect_outputs(lattice, lattice.source_vertex(), prefix, outputs, 500);
      REQUIRE_FALSE(outputs.empty());
      for (const auto& out : outputs) CHECK(out == b);
    }
  }

  TEST_CASE("vertices are topologically ordered") {
    EditLattice lattice = build_lattice(toks("a b c a"), toks("c b a"), 2);
    for (const LatticeEdge& e : lattice.edges()) {
      CHECK(lattice.vertex_index(e.from) < lattice.vertex_index(e.to));
    }
  }
}
