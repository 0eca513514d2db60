#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gec/parallel.hpp"
#include "gec/text.hpp"

namespace gec::m2 {

/// Correction actions of the annotated corpus. OK is the implicit label of
/// tokens no A line touches; it never appears in a parsed file.
enum class ActionKind { OK, Edit, AddBefore, Merge, Split, Delete, Move, AddAfter, Other };

inline constexpr ActionKind kAllActions[] = {
    ActionKind::OK,     ActionKind::Edit, ActionKind::AddBefore, ActionKind::Merge, ActionKind::Split,
    ActionKind::Delete, ActionKind::Move, ActionKind::AddAfter,  ActionKind::Other};

/// File spelling: "OK", "Edit", "Add_before", "Merge", ...
std::string_view to_string(ActionKind action);
std::optional<ActionKind> parse_action(std::string_view name);

bool is_insertion(ActionKind action);

/// One A line. `start`/`end` index the gaps between source tokens, so the
/// edit covers tokens [start, end); an insertion has start == end.
struct Edit {
  std::size_t start = 0;
  std::size_t end = 0;
  ActionKind action = ActionKind::Edit;
  std::string correction;
  int annotator = 0;

  bool operator==(const Edit&) const = default;
};

/// One S line plus its A lines. Edits are kept sorted by (start, end); the
/// original order is preserved among equal spans.
struct AnnotationBlock {
  std::string id;
  Tokens source;
  std::vector<Edit> edits;

  std::vector<Edit> edits_for(int annotator) const;
  std::set<int> annotators() const;

  bool operator==(const AnnotationBlock&) const = default;
};

/// (original, corrected, action) row of a training data set.
struct DatasetTriple {
  std::string original;
  std::string corrected;
  ActionKind action = ActionKind::OK;

  bool operator==(const DatasetTriple&) const = default;
};

struct CorpusStats {
  std::map<ActionKind, std::int64_t> action_counts;
  std::set<char32_t> char_inventory;
  /// frequency -> number of distinct source tokens seen exactly that often
  std::map<std::int64_t, std::int64_t> word_frequency;
  std::int64_t block_count = 0;
  std::int64_t edit_count = 0;
  std::int64_t token_count = 0;
  std::int64_t unique_tokens = 0;
  double error_density = 0.0;

  bool operator==(const CorpusStats&) const = default;
};

enum class ErrorKind {
  MalformedLine,
  SpanOutOfRange,
  UnknownAction,
  EmptyBlock,
  InvalidEdit,
  ConflictingEdits,
  EmptyCorpus,
};

std::string_view to_string(ErrorKind kind);

/// Raised by every operation in this module. `line` is 1-based and 0 when
/// the error has no position in an input file.
class M2Error : public std::runtime_error {
 public:
  M2Error(ErrorKind kind, std::size_t line, const std::string& message);

  ErrorKind kind() const { return kind_; }
  std::size_t line() const { return line_; }

 private:
  ErrorKind kind_;
  std::size_t line_;
};

/// Checks span bounds and per-action arity. Throws M2Error.
void validate_edit(const Edit& edit, std::size_t token_count, std::size_t line = 0);

/// Parses m2 text. Block ids are the 1-based block ordinals.
std::vector<AnnotationBlock> parse_m2(std::string_view text);

/// Serializes blocks; every block is followed by one blank line.
std::string write_m2(std::span<const AnnotationBlock> blocks);

/// Reconstructs the corrected sentence of `annotator` by splicing edits into
/// the source from right to left.
Tokens apply_edits(const AnnotationBlock& block, int annotator = 0);

/// Lists the block as (original, corrected, action) rows in source order.
std::vector<DatasetTriple> extract_triples(const AnnotationBlock& block, int annotator = 0);

CorpusStats corpus_stats(std::span<const AnnotationBlock> blocks, const ExecutionOptions& exec = {});

struct SentRecord {
  std::string id;
  Tokens tokens;

  bool operator==(const SentRecord&) const = default;
};

/// `<id>\t<tokens>\n` per record. Throws MalformedLine on an empty record.
std::string write_sent(std::span<const SentRecord> records);
/// Writes the source side of each block.
std::string write_sent(std::span<const AnnotationBlock> blocks);
std::vector<SentRecord> read_sent(std::string_view text);

}  // namespace gec::m2
