#include "gec/m2corpus.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <unordered_map>
#include <utility>

namespace gec::m2 {

namespace {

constexpr std::string_view kFieldSep = "|||";

struct ActionName {
  ActionKind action;
  std::string_view name;
};

constexpr std::array<ActionName, 9> kActionNames{{
    {ActionKind::OK, "OK"},
    {ActionKind::Edit, "Edit"},
    {ActionKind::AddBefore, "Add_before"},
    {ActionKind::Merge, "Merge"},
    {ActionKind::Split, "Split"},
    {ActionKind::Delete, "Delete"},
    {ActionKind::Move, "Move"},
    {ActionKind::AddAfter, "Add_after"},
    {ActionKind::Other, "Other"},
}};

std::vector<std::string_view> split_on(std::string_view text, std::string_view sep) {
  std::vector<std::string_view> parts;
  std::size_t pos = 0;
  while (true) {
    std::size_t hit = text.find(sep, pos);
    if (hit == std::string_view::npos) {
      parts.push_back(text.substr(pos));
      return parts;
    }
    parts.push_back(text.substr(pos, hit - pos));
    pos = hit + sep.size();
  }
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = nl == std::string_view::npos ? text.substr(pos) : text.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return lines;
}

template <class Int>
std::optional<Int> parse_int(std::string_view text) {
  Int value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

bool is_blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(), [](char c) { return c == ' ' || c == '\t'; });
}

Edit parse_a_line(std::string_view body, std::size_t token_count, std::size_t line_no) {
  auto fields = split_on(body, kFieldSep);
  if (fields.size() != 6) {
    throw M2Error(ErrorKind::MalformedLine, line_no,
                  "expected 6 '|||'-separated fields, found " + std::to_string(fields.size()));
  }
  Tokens span = split_tokens(fields[0]);
  if (span.size() != 2) throw M2Error(ErrorKind::MalformedLine, line_no, "span must be '<start> <end>'");
  auto start = parse_int<std::size_t>(span[0]);
  auto end = parse_int<std::size_t>(span[1]);
  if (!start || !end) throw M2Error(ErrorKind::MalformedLine, line_no, "span offsets must be non-negative integers");

  auto action = parse_action(fields[1]);
  if (!action || *action == ActionKind::OK) {
    throw M2Error(ErrorKind::UnknownAction, line_no, "unknown action '" + std::string(fields[1]) + "'");
  }
  auto annotator = parse_int<int>(fields[5]);
  if (!annotator || *annotator < 0) {
    throw M2Error(ErrorKind::MalformedLine, line_no, "annotator id must be a non-negative integer");
  }

  Edit edit{*start, *end, *action, std::string(fields[2]), *annotator};
  validate_edit(edit, token_count, line_no);
  return edit;
}

void sort_edits(std::vector<Edit>& edits) {
  std::stable_sort(edits.begin(), edits.end(), [](const Edit& a, const Edit& b) {
    return std::pair(a.start, a.end) < std::pair(b.start, b.end);
  });
}

// Edits of one annotator grouped by where they land.
struct EditPlan {
  struct Span {
    std::size_t start = 0;
    std::size_t end = 0;
    ActionKind action = ActionKind::Edit;
    std::string correction;
  };
  std::map<std::size_t, Span> spans;  // keyed by start
  std::map<std::size_t, std::vector<const Edit*>> add_after;
  std::map<std::size_t, std::vector<const Edit*>> add_before;
};

std::string concat_corrections(const std::string& a, const std::string& b) {
  std::string na = normalize_space(a);
  std::string nb = normalize_space(b);
  if (na.empty()) return nb;
  if (nb.empty()) return na;
  return na + " " + nb;
}

EditPlan plan_edits(const AnnotationBlock& block, const std::vector<Edit>& edits) {
  EditPlan plan;
  for (const Edit& edit : edits) {
    validate_edit(edit, block.source.size());
    if (edit.action == ActionKind::AddAfter) {
      plan.add_after[edit.start].push_back(&edit);
      continue;
    }
    if (edit.action == ActionKind::AddBefore) {
      plan.add_before[edit.start].push_back(&edit);
      continue;
    }
    auto [it, inserted] = plan.spans.try_emplace(edit.start);
    if (inserted) {
      it->second = {edit.start, edit.end, edit.action, edit.correction};
    } else if (it->second.end == edit.end) {
      // Several actions on one span: keep the first action, concatenate corrections.
      it->second.correction = concat_corrections(it->second.correction, edit.correction);
    } else {
      throw M2Error(ErrorKind::ConflictingEdits, 0,
                    "block " + block.id + ": edits [" + std::to_string(edit.start) + "," +
                        std::to_string(edit.end) + ") and [" + std::to_string(it->second.start) + "," +
                        std::to_string(it->second.end) + ") overlap");
    }
  }
  std::size_t covered_to = 0;
  const EditPlan::Span* previous = nullptr;
  for (const auto& [start, span] : plan.spans) {
    if (previous != nullptr && start < covered_to) {
      throw M2Error(ErrorKind::ConflictingEdits, 0,
                    "block " + block.id + ": edits [" + std::to_string(previous->start) + "," +
                        std::to_string(previous->end) + ") and [" + std::to_string(span.start) + "," +
                        std::to_string(span.end) + ") overlap");
    }
    covered_to = span.end;
    previous = &span;
  }
  return plan;
}

}  // namespace

std::string_view to_string(ActionKind action) {
  for (const auto& entry : kActionNames) {
    if (entry.action == action) return entry.name;
  }
  return "?";
}

std::optional<ActionKind> parse_action(std::string_view name) {
  for (const auto& entry : kActionNames) {
    if (entry.name == name) return entry.action;
  }
  return std::nullopt;
}

bool is_insertion(ActionKind action) {
  return action == ActionKind::AddBefore || action == ActionKind::AddAfter;
}

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MalformedLine: return "MalformedLine";
    case ErrorKind::SpanOutOfRange: return "SpanOutOfRange";
    case ErrorKind::UnknownAction: return "UnknownAction";
    case ErrorKind::EmptyBlock: return "EmptyBlock";
    case ErrorKind::InvalidEdit: return "InvalidEdit";
    case ErrorKind::ConflictingEdits: return "ConflictingEdits";
    case ErrorKind::EmptyCorpus: return "EmptyCorpus";
  }
  return "?";
}

M2Error::M2Error(ErrorKind kind, std::size_t line, const std::string& message)
    : std::runtime_error(message), kind_(kind), line_(line) {}

std::vector<Edit> AnnotationBlock::edits_for(int annotator) const {
  std::vector<Edit> out;
  for (const Edit& edit : edits) {
    if (edit.annotator == annotator) out.push_back(edit);
  }
  return out;
}

std::set<int> AnnotationBlock::annotators() const {
  std::set<int> ids;
  for (const Edit& edit : edits) ids.insert(edit.annotator);
  return ids;
}

void validate_edit(const Edit& edit, std::size_t token_count, std::size_t line) {
  if (edit.start > edit.end || edit.end > token_count) {
    throw M2Error(ErrorKind::SpanOutOfRange, line,
                  "span [" + std::to_string(edit.start) + "," + std::to_string(edit.end) +
                      ") outside a sentence of " + std::to_string(token_count) + " tokens");
  }
  const std::size_t width = edit.end - edit.start;
  auto fail = [&](const std::string& why) {
    throw M2Error(ErrorKind::InvalidEdit, line, std::string(to_string(edit.action)) + " " + why);
  };
  switch (edit.action) {
    case ActionKind::OK:
      fail("is implicit and cannot be annotated");
      break;
    case ActionKind::Delete:
      if (width != 1) fail("must cover exactly one token");
      if (!split_tokens(edit.correction).empty()) fail("must have an empty correction");
      break;
    case ActionKind::AddBefore:
    case ActionKind::AddAfter:
      if (width != 0) fail("must have an empty span");
      if (split_tokens(edit.correction).empty()) fail("must insert at least one token");
      break;
    case ActionKind::Merge:
    case ActionKind::Move:
      if (width < 2) fail("must cover at least two tokens");
      break;
    case ActionKind::Split:
    case ActionKind::Edit:
      if (width != 1) fail("must cover exactly one token");
      break;
    case ActionKind::Other:
      if (width < 1) fail("must cover at least one token");
      break;
  }
}

std::vector<AnnotationBlock> parse_m2(std::string_view text) {
  std::vector<AnnotationBlock> blocks;
  bool open = false;
  std::size_t line_no = 0;
  for (std::string_view line : split_lines(text)) {
    ++line_no;
    if (is_blank(line)) {
      open = false;
      continue;
    }
    if (line[0] == 'S' && (line.size() == 1 || line[1] == ' ')) {
      if (open) throw M2Error(ErrorKind::MalformedLine, line_no, "S line without a separating blank line");
      AnnotationBlock block;
      block.id = std::to_string(blocks.size() + 1);
      block.source = split_tokens(line.substr(1));
      if (block.source.empty()) throw M2Error(ErrorKind::EmptyBlock, line_no, "S line has no tokens");
      blocks.push_back(std::move(block));
      open = true;
    } else if (line[0] == 'A' && line.size() > 1 && line[1] == ' ') {
      if (!open) throw M2Error(ErrorKind::MalformedLine, line_no, "A line outside a block");
      AnnotationBlock& block = blocks.back();
      block.edits.push_back(parse_a_line(line.substr(2), block.source.size(), line_no));
    } else {
      throw M2Error(ErrorKind::MalformedLine, line_no, "line starts with neither 'S ' nor 'A '");
    }
  }
  for (auto& block : blocks) sort_edits(block.edits);
  return blocks;
}

std::string write_m2(std::span<const AnnotationBlock> blocks) {
  std::string out;
  for (const auto& block : blocks) {
    out += "S ";
    out += join_tokens(block.source);
    out += '\n';
    for (const Edit& edit : block.edits) {
      out += "A " + std::to_string(edit.start) + " " + std::to_string(edit.end);
      out += kFieldSep;
      out += to_string(edit.action);
      out += kFieldSep;
      out += edit.correction;
      out += "|||REQUIRED|||-NONE-|||";
      out += std::to_string(edit.annotator);
      out += '\n';
    }
    out += '\n';
  }
  return out;
}

Tokens apply_edits(const AnnotationBlock& block, int annotator) {
  const std::vector<Edit> edits = block.edits_for(annotator);
  const EditPlan plan = plan_edits(block, edits);

  // Splice from the highest start down. At one gap the final order is
  // Add_after, Add_before, then the span edit, so they are applied in reverse.
  struct Splice {
    std::size_t start;
    std::size_t end;
    int rank;
    std::size_t order;
    const std::string* correction;
  };
  std::vector<Splice> splices;
  for (const auto& [start, span] : plan.spans) splices.push_back({start, span.end, 0, 0, &span.correction});
  for (const auto& [start, list] : plan.add_before) {
    for (std::size_t k = 0; k < list.size(); ++k) splices.push_back({start, start, 1, k, &list[k]->correction});
  }
  for (const auto& [start, list] : plan.add_after) {
    for (std::size_t k = 0; k < list.size(); ++k) splices.push_back({start, start, 2, k, &list[k]->correction});
  }
  std::sort(splices.begin(), splices.end(), [](const Splice& a, const Splice& b) {
    if (a.start != b.start) return a.start > b.start;
    if (a.rank != b.rank) return a.rank < b.rank;
    return a.order > b.order;
  });

  Tokens out = block.source;
  for (const Splice& splice : splices) {
    Tokens replacement = split_tokens(*splice.correction);
    auto first = out.begin() + static_cast<std::ptrdiff_t>(splice.start);
    auto last = out.begin() + static_cast<std::ptrdiff_t>(splice.end);
    auto pos = out.erase(first, last);
    out.insert(pos, replacement.begin(), replacement.end());
  }
  return out;
}

std::vector<DatasetTriple> extract_triples(const AnnotationBlock& block, int annotator) {
  const std::vector<Edit> edits = block.edits_for(annotator);
  const EditPlan plan = plan_edits(block, edits);
  const std::size_t n = block.source.size();

  std::vector<DatasetTriple> triples;
  auto emit_insertions = [&](const std::map<std::size_t, std::vector<const Edit*>>& table, std::size_t gap) {
    auto it = table.find(gap);
    if (it == table.end()) return;
    for (const Edit* edit : it->second) triples.push_back({"", normalize_space(edit->correction), edit->action});
  };

  std::size_t k = 0;
  while (true) {
    emit_insertions(plan.add_after, k);
    emit_insertions(plan.add_before, k);
    if (k >= n) break;
    auto span = plan.spans.find(k);
    if (span == plan.spans.end()) {
      triples.push_back({block.source[k], block.source[k], ActionKind::OK});
      ++k;
      continue;
    }
    std::span<const std::string> original(block.source.data() + k, span->second.end - k);
    triples.push_back({join_tokens(original), normalize_space(span->second.correction), span->second.action});
    k = span->second.end;
  }
  return triples;
}

CorpusStats corpus_stats(std::span<const AnnotationBlock> blocks, const ExecutionOptions& exec) {
  if (blocks.empty()) throw M2Error(ErrorKind::EmptyCorpus, 0, "corpus has no blocks");

  struct Partial {
    std::array<std::int64_t, std::size(kAllActions)> actions{};
    std::set<char32_t> chars;
    std::unordered_map<std::string, std::int64_t> tokens;
  };

  auto partials = map_indexed(blocks.size(), exec, [&](std::size_t b) {
    const AnnotationBlock& block = blocks[b];
    Partial part;
    std::vector<bool> covered(block.source.size(), false);
    for (const Edit& edit : block.edits) {
      ++part.actions[static_cast<std::size_t>(edit.action)];
      for (std::size_t t = edit.start; t < edit.end && t < covered.size(); ++t) covered[t] = true;
    }
    part.actions[static_cast<std::size_t>(ActionKind::OK)] =
        static_cast<std::int64_t>(std::count(covered.begin(), covered.end(), false));
    for (const std::string& token : block.source) {
      for (char32_t c : decode_utf8(token)) part.chars.insert(c);
      ++part.tokens[token];
    }
    return part;
  });

  CorpusStats stats;
  stats.char_inventory.insert(U' ');
  std::unordered_map<std::string, std::int64_t> token_freq;
  for (const Partial& part : partials) {
    for (ActionKind action : kAllActions) {
      stats.action_counts[action] += part.actions[static_cast<std::size_t>(action)];
    }
    stats.char_inventory.insert(part.chars.begin(), part.chars.end());
    for (const auto& [token, count] : part.tokens) token_freq[token] += count;
  }
  for (const auto& block : blocks) {
    stats.edit_count += static_cast<std::int64_t>(block.edits.size());
    stats.token_count += static_cast<std::int64_t>(block.source.size());
  }
  for (const auto& [token, count] : token_freq) ++stats.word_frequency[count];
  stats.block_count = static_cast<std::int64_t>(blocks.size());
  stats.unique_tokens = static_cast<std::int64_t>(token_freq.size());
  stats.error_density = static_cast<double>(stats.edit_count) / static_cast<double>(stats.block_count);
  return stats;
}

std::string write_sent(std::span<const SentRecord> records) {
  std::string out;
  for (const SentRecord& record : records) {
    if (record.id.empty() || record.id.find_first_of("\t\n") != std::string::npos) {
      throw M2Error(ErrorKind::MalformedLine, 0, "sentence id must be non-empty and contain no tab or newline");
    }
    if (record.tokens.empty()) {
      throw M2Error(ErrorKind::MalformedLine, 0, "sentence " + record.id + " has no tokens");
    }
    out += record.id;
    out += '\t';
    out += join_tokens(record.tokens);
    out += '\n';
  }
  return out;
}

std::string write_sent(std::span<const AnnotationBlock> blocks) {
  std::vector<SentRecord> records;
  records.reserve(blocks.size());
  for (const auto& block : blocks) records.push_back({block.id, block.source});
  return write_sent(std::span<const SentRecord>(records));
}

std::vector<SentRecord> read_sent(std::string_view text) {
  std::vector<SentRecord> records;
  std::size_t line_no = 0;
  for (std::string_view line : split_lines(text)) {
    ++line_no;
    std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos) throw M2Error(ErrorKind::MalformedLine, line_no, "missing tab after id");
    if (tab == 0) throw M2Error(ErrorKind::MalformedLine, line_no, "empty sentence id");
    SentRecord record{std::string(line.substr(0, tab)), split_tokens(line.substr(tab + 1))};
    if (record.tokens.empty()) throw M2Error(ErrorKind::MalformedLine, line_no, "sentence has no tokens");
    records.push_back(std::move(record));
  }
  return records;
}

}  // namespace gec::m2
