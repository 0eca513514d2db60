#include "gec/maxmatch.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

#include "gec/metrics.hpp"

namespace gec::maxmatch {

namespace {

// Path cost compared lexicographically: reweighted lattice cost first, then
// the number of changed edges that matched no gold edit.
struct PathCost {
  std::int64_t weight = 0;
  std::int64_t unmatched_changes = 0;

  auto operator<=>(const PathCost&) const = default;
};

struct Label {
  PathCost cost;
  std::uint64_t used_insertions = 0;  // gold insertions consumed in the current column
  std::size_t prev_vertex = 0;
  std::size_t prev_label = 0;
  std::size_t via_edge = 0;
};

std::size_t count_matches(const std::vector<SystemEdit>& predicted, const std::vector<SystemEdit>& gold) {
  std::set<SystemEdit> gold_set(gold.begin(), gold.end());
  std::set<SystemEdit> hit;
  for (const SystemEdit& edit : predicted) {
    if (gold_set.count(edit) != 0) hit.insert(edit);
  }
  return hit.size();
}

}  // namespace

M2Report make_report(const Counts& counts, double beta) {
  M2Report report;
  report.tp = counts.tp;
  report.fp = counts.proposed - counts.tp;
  report.fn = counts.gold - counts.tp;
  report.precision = gec::precision(report.tp, report.fp);
  report.recall = gec::recall(report.tp, report.fn);
  report.f_beta = gec::f_beta(report.precision, report.recall, beta);
  report.beta = beta;
  return report;
}

M2Report score_edit_sets(std::span<const std::pair<std::vector<SystemEdit>, std::vector<SystemEdit>>> sentences,
                         double beta) {
  Counts total;
  for (const auto& [gold, predicted] : sentences) {
    std::set<SystemEdit> gold_set(gold.begin(), gold.end());
    std::set<SystemEdit> predicted_set(predicted.begin(), predicted.end());
    std::vector<SystemEdit> common;
    std::set_intersection(gold_set.begin(), gold_set.end(), predicted_set.begin(), predicted_set.end(),
                          std::back_inserter(common));
    total += Counts{static_cast<std::int64_t>(common.size()), static_cast<std::int64_t>(predicted_set.size()),
                    static_cast<std::int64_t>(gold_set.size())};
  }
  return make_report(total, beta);
}

std::vector<SystemEdit> gold_as_system_edits(std::span<const std::string> source, std::span<const m2::Edit> gold) {
  std::set<SystemEdit> unique;
  for (const m2::Edit& edit : gold) {
    if (edit.end > source.size() || edit.start > edit.end) {
      throw std::out_of_range("gold edit span exceeds the source sentence");
    }
    std::span<const std::string> covered = source.subspan(edit.start, edit.end - edit.start);
    SystemEdit system{edit.start, edit.end, join_tokens(covered), normalize_space(edit.correction)};
    if (system.original == system.replacement) continue;
    unique.insert(std::move(system));
  }
  return {unique.begin(), unique.end()};
}

Extraction extract_edits(std::span<const std::string> source, std::span<const std::string> hypothesis,
                         std::span<const m2::Edit> gold, int max_unchanged) {
  const std::vector<SystemEdit> gold_edits = gold_as_system_edits(source, gold);
  const align::EditLattice lattice = align::build_lattice(source, hypothesis, max_unchanged);
  const auto& edges = lattice.edges();
  const std::int64_t reward =
      -static_cast<std::int64_t>(max_unchanged + 1) * static_cast<std::int64_t>(edges.size());

  // Gold insertions get a bit within their column so a path cannot collect
  // the same insertion twice.
  std::map<SystemEdit, int> insertion_bit;
  {
    std::map<std::size_t, int> next_bit;
    for (const SystemEdit& g : gold_edits) {
      if (g.start != g.end) continue;
      int& bit = next_bit[g.start];
      if (bit < 64) insertion_bit[g] = bit++;
    }
  }

  // Per edge: which gold edit it reproduces, if any.
  std::vector<const SystemEdit*> edge_gold(edges.size(), nullptr);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const align::LatticeEdge& edge = edges[e];
    if (!edge.is_change()) continue;
    SystemEdit candidate{edge.from.i, edge.to.i, {}, join_tokens(edge.target_phrase)};
    auto it = std::lower_bound(gold_edits.begin(), gold_edits.end(), candidate);
    if (it != gold_edits.end() && *it == candidate) edge_gold[e] = &*it;
  }

  const std::size_t vertex_count = lattice.vertices().size();
  std::vector<std::vector<Label>> labels(vertex_count);
  std::vector<std::map<std::uint64_t, std::size_t>> label_of_mask(vertex_count);
  labels[lattice.source_vertex()].push_back(Label{});
  label_of_mask[lattice.source_vertex()][0] = 0;

  // Vertices are topologically ordered, so one sweep relaxes every edge once
  // per label (Bellman-Ford on a DAG needs no further passes).
  for (std::size_t v = 0; v < vertex_count; ++v) {
    for (std::size_t l = 0; l < labels[v].size(); ++l) {
      const Label here = labels[v][l];
      for (std::size_t e : lattice.out_edges(v)) {
        const align::LatticeEdge& edge = edges[e];
        const bool vertical = edge.from.i == edge.to.i;
        std::uint64_t mask = vertical ? here.used_insertions : 0;
        bool rewarded = false;
        if (const SystemEdit* g = edge_gold[e]; g != nullptr) {
          if (g->start == g->end) {
            auto bit = insertion_bit.find(*g);
            if (bit == insertion_bit.end()) {
              rewarded = true;
            } else if ((here.used_insertions & (std::uint64_t{1} << bit->second)) == 0) {
              rewarded = true;
              mask |= std::uint64_t{1} << bit->second;
            }
          } else {
            rewarded = true;
          }
        }
        PathCost cost = here.cost;
        cost.weight += rewarded ? reward : edge.cost;
        if (edge.is_change() && !rewarded) ++cost.unmatched_changes;

        const std::size_t to = lattice.vertex_index(edge.to);
        auto [slot, inserted] = label_of_mask[to].try_emplace(mask, labels[to].size());
        Label next{cost, mask, v, l, e};
        if (inserted) {
          labels[to].push_back(next);
        } else if (cost < labels[to][slot->second].cost) {
          labels[to][slot->second] = next;
        }
      }
    }
  }

  const std::size_t sink = lattice.sink_vertex();
  std::size_t best = 0;
  for (std::size_t l = 1; l < labels[sink].size(); ++l) {
    if (labels[sink][l].cost < labels[sink][best].cost) best = l;
  }

  Extraction result;
  result.lattice_edges = edges.size();
  std::size_t v = sink;
  std::size_t l = best;
  while (v != lattice.source_vertex()) {
    const Label& label = labels[v][l];
    const align::LatticeEdge& edge = edges[label.via_edge];
    if (edge.is_change()) {
      result.edits.push_back(
          {edge.from.i, edge.to.i, join_tokens(edge.source_phrase), join_tokens(edge.target_phrase)});
    }
    v = label.prev_vertex;
    l = label.prev_label;
  }
  std::reverse(result.edits.begin(), result.edits.end());

  result.counts.proposed = static_cast<std::int64_t>(result.edits.size());
  result.counts.gold = static_cast<std::int64_t>(gold_edits.size());
  result.counts.tp = static_cast<std::int64_t>(count_matches(result.edits, gold_edits));
  return result;
}

Tokens apply_system_edits(std::span<const std::string> source, std::span<const SystemEdit> edits) {
  struct Item {
    const SystemEdit* edit;
    std::size_t order;
  };
  std::vector<Item> items;
  for (std::size_t k = 0; k < edits.size(); ++k) items.push_back({&edits[k], k});
  std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
    if (a.edit->start != b.edit->start) return a.edit->start > b.edit->start;
    const bool a_ins = a.edit->start == a.edit->end;
    const bool b_ins = b.edit->start == b.edit->end;
    if (a_ins != b_ins) return !a_ins;
    return a.order > b.order;
  });

  Tokens out(source.begin(), source.end());
  std::size_t limit = source.size();
  for (const Item& item : items) {
    const SystemEdit& edit = *item.edit;
    if (edit.start > edit.end || edit.end > limit) {
      throw std::invalid_argument("system edits overlap or exceed the source");
    }
    if (edit.start < edit.end) limit = edit.start;
    Tokens replacement = split_tokens(edit.replacement);
    auto pos = out.erase(out.begin() + static_cast<std::ptrdiff_t>(edit.start),
                         out.begin() + static_cast<std::ptrdiff_t>(edit.end));
    out.insert(pos, replacement.begin(), replacement.end());
  }
  return out;
}

CorpusResult score_corpus(std::span<const Sentence> sentences, const Options& options,
                          const ExecutionOptions& exec) {
  if (!(options.beta > 0.0)) throw std::invalid_argument("beta must be > 0");
  if (options.max_unchanged < 0) throw std::invalid_argument("max_unchanged must be >= 0");

  struct Candidate {
    int annotator;
    Extraction extraction;
  };
  auto candidates = map_indexed(sentences.size(), exec, [&](std::size_t s) {
    const Sentence& sentence = sentences[s];
    std::vector<int> annotators;
    if (options.annotator >= 0) {
      annotators.push_back(options.annotator);
    } else {
      std::set<int> ids;
      for (const m2::Edit& edit : sentence.gold) ids.insert(edit.annotator);
      if (ids.empty()) ids.insert(0);
      annotators.assign(ids.begin(), ids.end());
    }
    std::vector<Candidate> out;
    for (int annotator : annotators) {
      std::vector<m2::Edit> gold;
      for (const m2::Edit& edit : sentence.gold) {
        if (edit.annotator == annotator) gold.push_back(edit);
      }
      out.push_back({annotator, extract_edits(sentence.source, sentence.hypothesis, gold, options.max_unchanged)});
    }
    return out;
  });

  // Sequential, input-ordered choice of annotator keeps the result
  // independent of scheduling.
  CorpusResult result;
  Counts total;
  for (auto& per_sentence : candidates) {
    std::size_t pick = 0;
    double best_f = -1.0;
    for (std::size_t c = 0; c < per_sentence.size(); ++c) {
      Counts trial = total;
      trial += per_sentence[c].extraction.counts;
      double f = make_report(trial, options.beta).f_beta;
      if (f > best_f) {
        best_f = f;
        pick = c;
      }
    }
    total += per_sentence[pick].extraction.counts;
    result.sentences.push_back({std::move(per_sentence[pick].extraction), per_sentence[pick].annotator});
  }
  result.report = make_report(total, options.beta);
  return result;
}

}  // namespace gec::maxmatch
