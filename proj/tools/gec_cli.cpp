// gec: inspect annotated corpora and score correction output.

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gec/align.hpp"
#include "gec/imeasure.hpp"
#include "gec/m2corpus.hpp"
#include "gec/maxmatch.hpp"
#include "gec/ngram_metrics.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitUsage = 2;

/// A failure tied to an input file. `line` is 0 when no position applies.
struct InputError {
  std::string path;
  std::size_t line = 0;
  std::string kind;
  std::string message;
};

enum class Format { Text, KeyValue };

struct Common {
  int jobs = 0;
  std::string format = "text";

  gec::ExecutionOptions exec() const {
    return {jobs == 1 ? gec::Execution::Serial : gec::Execution::Parallel, jobs};
  }
  Format fmt() const { return format == "kv" ? Format::KeyValue : Format::Text; }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError{path, 0, "IOError", "cannot open file"};
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Line number of every S line, so per-block failures can point at the block.
std::vector<std::size_t> block_lines(const std::string& text) {
  std::vector<std::size_t> lines;
  std::istringstream in(text);
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.rfind("S", 0) == 0 && (line.size() == 1 || line[1] == ' ')) lines.push_back(number);
  }
  return lines;
}

struct Gold {
  std::string path;
  std::vector<gec::m2::AnnotationBlock> blocks;
  std::vector<std::size_t> lines;

  std::size_t line_of(std::size_t block) const { return block < lines.size() ? lines[block] : 0; }
};

Gold load_m2(const std::string& path, bool allow_empty = false) {
  std::string text = read_file(path);
  Gold gold;
  gold.path = path;
  try {
    gold.blocks = gec::m2::parse_m2(text);
  } catch (const gec::m2::M2Error& e) {
    throw InputError{path, e.line(), std::string(gec::m2::to_string(e.kind())), e.what()};
  }
  if (gold.blocks.empty() && !allow_empty) {
    throw InputError{path, 0, "EmptyCorpus", "no annotation blocks"};
  }
  gold.lines = block_lines(text);
  return gold;
}

/// Reads `id<TAB>tokens` records, or plain tokenized lines when the file has no tabs.
std::vector<gec::Tokens> load_sentences(const std::string& path) {
  std::string text = read_file(path);
  std::vector<gec::Tokens> out;
  if (text.find('\t') != std::string::npos) {
    try {
      for (auto& record : gec::m2::read_sent(text)) out.push_back(std::move(record.tokens));
    } catch (const gec::m2::M2Error& e) {
      throw InputError{path, e.line(), std::string(gec::m2::to_string(e.kind())), e.what()};
    }
    return out;
  }
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(gec::split_tokens(line));
  // A final newline does not start another sentence.
  return out;
}

void require_count(const std::string& path, std::size_t got, std::size_t want, const std::string& against) {
  if (got != want) {
    throw InputError{path, 0, "LengthMismatch",
                     std::to_string(got) + " sentences but " + against + " has " + std::to_string(want)};
  }
}

void check_sources(const std::string& src_path, const Gold& gold) {
  auto sources = load_sentences(src_path);
  require_count(src_path, sources.size(), gold.blocks.size(), gold.path);
  for (std::size_t s = 0; s < sources.size(); ++s) {
    if (sources[s] != gold.blocks[s].source) {
      throw InputError{src_path, s + 1, "SourceMismatch", "sentence differs from the S line of block " +
                                                              std::to_string(s + 1) + " in " + gold.path};
    }
  }
}

std::string fixed(double value, int digits) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(digits) << value;
  return out.str();
}

std::string exact(double value) {
  std::ostringstream out;
  out << std::setprecision(17) << value;
  return out.str();
}

std::string percent(double value) { return fixed(100.0 * value, 2); }

// ---------------------------------------------------------------- commands

int run_parse(const std::string& gold_path, bool as_sent) {
  Gold gold = load_m2(gold_path);
  if (as_sent) {
    std::cout << gec::m2::write_sent(std::span<const gec::m2::AnnotationBlock>(gold.blocks));
  } else {
    std::cout << gec::m2::write_m2(gold.blocks);
  }
  return kExitOk;
}

int run_apply(const std::string& gold_path, int annotator) {
  Gold gold = load_m2(gold_path);
  for (std::size_t b = 0; b < gold.blocks.size(); ++b) {
    try {
      std::cout << gec::join_tokens(gec::m2::apply_edits(gold.blocks[b], annotator)) << '\n';
    } catch (const gec::m2::M2Error& e) {
      throw InputError{gold_path, gold.line_of(b), std::string(gec::m2::to_string(e.kind())), e.what()};
    }
  }
  return kExitOk;
}

int run_triples(const std::string& gold_path, int annotator) {
  Gold gold = load_m2(gold_path);
  for (std::size_t b = 0; b < gold.blocks.size(); ++b) {
    try {
      for (const auto& t : gec::m2::extract_triples(gold.blocks[b], annotator)) {
        std::cout << gold.blocks[b].id << '\t' << t.original << '\t' << t.corrected << '\t'
                  << gec::m2::to_string(t.action) << '\n';
      }
    } catch (const gec::m2::M2Error& e) {
      throw InputError{gold_path, gold.line_of(b), std::string(gec::m2::to_string(e.kind())), e.what()};
    }
  }
  return kExitOk;
}

int run_stats(const std::string& gold_path, const Common& common) {
  Gold gold = load_m2(gold_path, true);
  gec::m2::CorpusStats stats;
  try {
    stats = gec::m2::corpus_stats(gold.blocks, common.exec());
  } catch (const gec::m2::M2Error& e) {
    throw InputError{gold_path, e.line(), std::string(gec::m2::to_string(e.kind())), e.what()};
  }
  if (common.fmt() == Format::KeyValue) {
    std::cout << "blocks=" << stats.block_count << "\ntokens=" << stats.token_count
              << "\nunique_tokens=" << stats.unique_tokens << "\nedits=" << stats.edit_count
              << "\nerror_density=" << exact(stats.error_density) << "\ncharacters=" << stats.char_inventory.size()
              << '\n';
    for (const auto& [action, count] : stats.action_counts) {
      std::cout << "action." << gec::m2::to_string(action) << '=' << count << '\n';
    }
    for (const auto& [frequency, words] : stats.word_frequency) {
      std::cout << "frequency." << frequency << '=' << words << '\n';
    }
    return kExitOk;
  }
  std::cout << "Blocks         : " << stats.block_count << '\n'
            << "Tokens         : " << stats.token_count << '\n'
            << "Unique tokens  : " << stats.unique_tokens << '\n'
            << "Edits          : " << stats.edit_count << '\n'
            << "Error density  : " << fixed(stats.error_density, 4) << '\n'
            << "Characters     : " << stats.char_inventory.size() << "\n\n"
            << "Action        Count\n";
  for (const auto& [action, count] : stats.action_counts) {
    std::cout << std::left << std::setw(12) << gec::m2::to_string(action) << std::right << std::setw(7) << count
              << '\n';
  }
  std::cout << "\nFrequency   Words\n";
  for (const auto& [frequency, words] : stats.word_frequency) {
    std::cout << std::setw(9) << frequency << std::setw(8) << words << '\n';
  }
  return kExitOk;
}

struct M2Flags {
  std::string gold, hyp, src;
  double beta = 0.5;
  int max_unchanged = 2;
  int annotator = 0;
  bool verbose = false;
};

int run_score_m2(const M2Flags& flags, const Common& common) {
  Gold gold = load_m2(flags.gold);
  if (!flags.src.empty()) check_sources(flags.src, gold);
  auto hyps = load_sentences(flags.hyp);
  require_count(flags.hyp, hyps.size(), gold.blocks.size(), flags.gold);

  std::vector<gec::maxmatch::Sentence> corpus;
  corpus.reserve(hyps.size());
  for (std::size_t s = 0; s < hyps.size(); ++s) {
    corpus.push_back({gold.blocks[s].source, std::move(hyps[s]), gold.blocks[s].edits});
  }
  gec::maxmatch::Options options{flags.beta, flags.max_unchanged, flags.annotator};
  auto result = gec::maxmatch::score_corpus(corpus, options, common.exec());

  if (flags.verbose) {
    for (std::size_t s = 0; s < result.sentences.size(); ++s) {
      const auto& x = result.sentences[s].extraction;
      std::cout << "sentence " << (s + 1) << " (annotator " << result.sentences[s].annotator << ", "
                << x.lattice_edges << " lattice edges): correct " << x.counts.tp << ", proposed "
                << x.counts.proposed << ", gold " << x.counts.gold << '\n';
      for (const auto& e : x.edits) {
        std::cout << "  " << e.start << ' ' << e.end << " \"" << e.original << "\" -> \"" << e.replacement << "\"\n";
      }
    }
  }
  const auto& r = result.report;
  if (common.fmt() == Format::KeyValue) {
    std::cout << "tp=" << r.tp << "\nfp=" << r.fp << "\nfn=" << r.fn << "\nprecision=" << exact(r.precision)
              << "\nrecall=" << exact(r.recall) << "\nf_beta=" << exact(r.f_beta) << "\nbeta=" << exact(r.beta)
              << '\n';
  } else {
    std::ostringstream label;
    label << "F_" << r.beta;
    std::cout << "Precision : " << fixed(r.precision, 4) << '\n'
              << "Recall    : " << fixed(r.recall, 4) << '\n'
              << std::left << std::setw(10) << label.str() << std::right << ": " << fixed(r.f_beta, 4) << '\n';
  }
  return kExitOk;
}

struct IMeasureFlags {
  std::string gold, xml, hyp, src;
  double w = 2.0;
  double beta = 0.5;
  std::vector<double> costs{0.0, 2.0, 3.0};
  int annotator = 0;
  bool no_improvement = false;
};

int run_score_imeasure(const IMeasureFlags& flags, const Common& common) {
  Gold gold;
  if (!flags.xml.empty()) {
    gold.path = flags.xml;
    try {
      gold.blocks = gec::imeasure::read_gold_xml(read_file(flags.xml), flags.annotator);
    } catch (const gec::m2::M2Error& e) {
      throw InputError{flags.xml, e.line(), std::string(gec::m2::to_string(e.kind())), e.what()};
    }
    if (gold.blocks.empty()) throw InputError{flags.xml, 0, "EmptyCorpus", "no sentences"};
  } else {
    gold = load_m2(flags.gold);
  }
  if (!flags.src.empty()) check_sources(flags.src, gold);
  auto hyps = load_sentences(flags.hyp);
  require_count(flags.hyp, hyps.size(), gold.blocks.size(), gold.path);

  std::vector<gec::imeasure::Sentence> corpus;
  for (std::size_t s = 0; s < hyps.size(); ++s) {
    try {
      corpus.push_back(gec::imeasure::sentence_from_block(gold.blocks[s], std::move(hyps[s]), flags.annotator));
    } catch (const gec::m2::M2Error& e) {
      throw InputError{gold.path, gold.line_of(s), std::string(gec::m2::to_string(e.kind())), e.what()};
    }
  }
  gec::imeasure::Options options;
  options.costs = {flags.costs[0], flags.costs[1], flags.costs[2]};
  options.w = flags.w;
  options.beta = flags.beta;
  options.compute_improvement = !flags.no_improvement;
  auto report = gec::imeasure::imeasure_score(corpus, options, common.exec());

  const auto& d = report.detection;
  const auto& c = report.correction;
  if (common.fmt() == Format::KeyValue) {
    for (const auto* track : {&d, &c}) {
      const std::string p = track == &d ? "detection." : "correction.";
      std::cout << p << "tp=" << track->tp << '\n' << p << "tn=" << track->tn << '\n' << p << "fp=" << track->fp
                << '\n' << p << "fn=" << track->fn << '\n' << p << "fpn=" << track->fpn << '\n' << p
                << "precision=" << exact(track->precision) << '\n' << p << "recall=" << exact(track->recall) << '\n'
                << p << "f_beta=" << exact(track->f_beta) << '\n' << p << "accuracy=" << exact(track->accuracy)
                << '\n' << p << "accuracy_baseline=" << exact(track->accuracy_baseline) << '\n' << p
                << "wacc=" << exact(track->wacc) << '\n' << p << "wacc_baseline=" << exact(track->wacc_baseline)
                << '\n';
      if (track->improvement) std::cout << p << "improvement=" << exact(*track->improvement) << '\n';
    }
    return kExitOk;
  }

  std::ostringstream f_label;
  f_label << "F_" << report.beta;
  auto row = [](const std::string& name, const std::string& det, const std::string& cor) {
    std::cout << std::left << std::setw(8) << name << std::right << std::setw(12) << det << std::setw(12) << cor
              << '\n';
  };
  row("", "Detection", "Correction");
  row("TP", std::to_string(d.tp), std::to_string(c.tp));
  row("TN", std::to_string(d.tn), std::to_string(c.tn));
  row("FP", std::to_string(d.fp), std::to_string(c.fp));
  row("FN", std::to_string(d.fn), std::to_string(c.fn));
  row("FPN", "-", std::to_string(c.fpn));
  row("P", percent(d.precision), percent(c.precision));
  row("R", percent(d.recall), percent(c.recall));
  row(f_label.str(), percent(d.f_beta), percent(c.f_beta));
  row("Acc", percent(d.accuracy), percent(c.accuracy));
  row("Acc_b", percent(d.accuracy_baseline), percent(c.accuracy_baseline));
  row("WAcc", percent(d.wacc), percent(c.wacc));
  row("WAcc_b", percent(d.wacc_baseline), percent(c.wacc_baseline));
  if (d.improvement && c.improvement) row("I", percent(*d.improvement), percent(*c.improvement));
  return kExitOk;
}

struct NgramFlags {
  std::string hyp, ref, src;
  int order = 4;
  double lambda = 0.0;
  bool smoothing = false;
  std::string bp = "standard";
};

void print_ngram(const std::string& name, double score, const std::vector<double>& precisions, double bp,
                 std::int64_t hyp_len, std::int64_t ref_len, Format fmt) {
  if (fmt == Format::KeyValue) {
    std::cout << name << '=' << exact(score) << '\n';
    for (std::size_t n = 0; n < precisions.size(); ++n) std::cout << 'p' << (n + 1) << '=' << exact(precisions[n]) << '\n';
    std::cout << "brevity_penalty=" << exact(bp) << "\nhyp_len=" << hyp_len << "\nref_len=" << ref_len << '\n';
    return;
  }
  std::cout << name << " = " << fixed(score, 6) << " (";
  for (std::size_t n = 0; n < precisions.size(); ++n) std::cout << (n ? "/" : "") << fixed(precisions[n], 4);
  std::cout << ", BP=" << fixed(bp, 4) << ", hyp_len=" << hyp_len << ", ref_len=" << ref_len << ")\n";
}

int run_score_bleu(const NgramFlags& flags, const Common& common) {
  auto hyps = load_sentences(flags.hyp);
  auto refs = load_sentences(flags.ref);
  require_count(flags.hyp, hyps.size(), refs.size(), flags.ref);
  gec::ngram::BleuOptions options{flags.order, flags.smoothing};
  gec::ngram::BleuReport r;
  try {
    r = gec::ngram::bleu(hyps, refs, options, common.exec());
  } catch (const gec::ngram::NgramError& e) {
    throw InputError{flags.hyp, 0, "EmptyHypothesis", e.what()};
  }
  print_ngram("BLEU", r.bleu, r.precisions, r.brevity_penalty, r.hypothesis_length, r.reference_length, common.fmt());
  return kExitOk;
}

int run_score_gleu(const NgramFlags& flags, const Common& common) {
  auto hyps = load_sentences(flags.hyp);
  auto refs = load_sentences(flags.ref);
  auto srcs = load_sentences(flags.src);
  require_count(flags.hyp, hyps.size(), refs.size(), flags.ref);
  require_count(flags.src, srcs.size(), refs.size(), flags.ref);
  gec::ngram::GleuOptions options;
  options.max_order = flags.order;
  options.lambda = flags.lambda;
  options.smoothing = flags.smoothing;
  options.brevity = flags.bp == "printed" ? gec::ngram::BrevityPenalty::Printed : gec::ngram::BrevityPenalty::Standard;
  gec::ngram::GleuReport r;
  try {
    r = gec::ngram::gleu(hyps, refs, srcs, options, common.exec());
  } catch (const gec::ngram::NgramError& e) {
    throw InputError{flags.hyp, 0, "EmptyHypothesis", e.what()};
  }
  print_ngram("GLEU", r.gleu, r.precisions, r.brevity_penalty, r.hypothesis_length, r.reference_length, common.fmt());
  return kExitOk;
}

int run_lattice(const std::string& source, const std::string& hypothesis, int max_unchanged) {
  auto lattice = gec::align::build_lattice(gec::split_tokens(source), gec::split_tokens(hypothesis), max_unchanged);
  std::cout << gec::align::dump_lattice(lattice);
  return kExitOk;
}

void add_common(CLI::App* cmd, Common& common) {
  cmd->add_option("--jobs", common.jobs, "worker threads; 1 runs serially, 0 uses all cores")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--format", common.format, "report format")->check(CLI::IsMember({"text", "kv"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Inspect annotated error-correction corpora and score system output."};
  app.require_subcommand(1);

  Common common;
  std::string gold_path;
  int annotator = 0;
  bool as_sent = false;

  auto* parse = app.add_subcommand("parse", "validate an m2 file and print it normalized");
  parse->add_option("--gold", gold_path, "m2 file")->required();
  parse->add_flag("--sent", as_sent, "print the source sentences as id<TAB>tokens");

  auto* apply = app.add_subcommand("apply", "print the corrected sentence of every block");
  apply->add_option("--gold", gold_path, "m2 file")->required();
  apply->add_option("--annotator", annotator, "annotator id")->check(CLI::NonNegativeNumber);

  auto* triples = app.add_subcommand("triples", "print (original, corrected, action) rows");
  triples->add_option("--gold", gold_path, "m2 file")->required();
  triples->add_option("--annotator", annotator, "annotator id")->check(CLI::NonNegativeNumber);

  auto* stats = app.add_subcommand("stats", "corpus statistics");
  stats->add_option("--gold", gold_path, "m2 file")->required();
  add_common(stats, common);

  M2Flags m2;
  auto* score_m2 = app.add_subcommand("score-m2", "MaxMatch precision, recall and F");
  score_m2->add_option("--gold", m2.gold, "m2 gold file")->required();
  score_m2->add_option("--hyp", m2.hyp, "system output (.sent or one sentence per line)")->required();
  score_m2->add_option("--src", m2.src, "source sentences, checked against the gold S lines");
  score_m2->add_option("--beta", m2.beta, "F-measure beta")->check(CLI::PositiveNumber);
  score_m2->add_option("--max-unchanged", m2.max_unchanged, "unchanged tokens allowed inside one phrase edit")
      ->check(CLI::NonNegativeNumber);
  score_m2->add_option("--annotator", m2.annotator, "annotator id, -1 picks the best per sentence")
      ->check(CLI::Range(-1, std::numeric_limits<int>::max()));
  score_m2->add_flag("--verbose", m2.verbose, "print the extracted edits of every sentence");
  add_common(score_m2, common);

  IMeasureFlags im;
  auto* score_im = app.add_subcommand("score-imeasure", "token-level I-measure");
  auto* im_gold = score_im->add_option("--gold", im.gold, "m2 gold file");
  auto* im_xml = score_im->add_option("--xml", im.xml, "XML gold file");
  im_gold->excludes(im_xml);
  score_im->add_option("--hyp", im.hyp, "system output")->required();
  score_im->add_option("--src", im.src, "source sentences, checked against the gold");
  score_im->add_option("--w", im.w, "weight of true positives in weighted accuracy (> 1)")
      ->check(CLI::Range(1.0 + 1e-12, std::numeric_limits<double>::max()));
  score_im->add_option("--beta", im.beta, "F-measure beta")->check(CLI::PositiveNumber);
  score_im->add_option("--costs", im.costs, "match,gap,mismatch alignment costs")->delimiter(',')->expected(3);
  score_im->add_option("--annotator", im.annotator, "annotator id")->check(CLI::NonNegativeNumber);
  score_im->add_flag("--no-improvement", im.no_improvement, "omit the improvement score");
  add_common(score_im, common);

  NgramFlags ng;
  auto* score_bleu = app.add_subcommand("score-bleu", "corpus BLEU");
  score_bleu->add_option("--hyp", ng.hyp, "system output")->required();
  score_bleu->add_option("--ref", ng.ref, "reference sentences")->required();
  score_bleu->add_option("--order,-N", ng.order, "maximum n-gram order")->check(CLI::Range(1, 16));
  score_bleu->add_flag("--smoothing", ng.smoothing, "add-one smoothing of every order");
  add_common(score_bleu, common);

  auto* score_gleu = app.add_subcommand("score-gleu", "corpus GLEU");
  score_gleu->add_option("--hyp", ng.hyp, "system output")->required();
  score_gleu->add_option("--ref", ng.ref, "reference sentences")->required();
  score_gleu->add_option("--src", ng.src, "source sentences")->required();
  score_gleu->add_option("--order,-N", ng.order, "maximum n-gram order")->check(CLI::Range(1, 16));
  score_gleu->add_option("--lambda", ng.lambda, "penalty for keeping source-only n-grams")
      ->check(CLI::NonNegativeNumber);
  score_gleu->add_flag("--smoothing", ng.smoothing, "add-one smoothing of every order");
  score_gleu->add_option("--bp", ng.bp, "brevity penalty form")->check(CLI::IsMember({"standard", "printed"}));
  add_common(score_gleu, common);

  std::string lattice_src, lattice_hyp;
  int lattice_u = 2;
  auto* lattice = app.add_subcommand("lattice", "print the edit lattice of one sentence pair");
  lattice->add_option("--source", lattice_src, "source sentence")->required();
  lattice->add_option("--hypothesis", lattice_hyp, "hypothesis sentence")->required();
  lattice->add_option("--max-unchanged", lattice_u, "unchanged tokens allowed inside one phrase edit")
      ->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
    if (score_im->parsed()) {
      if (im.gold.empty() == im.xml.empty()) throw CLI::ValidationError("score-imeasure needs exactly one of --gold, --xml");
      try {
        gec::imeasure::validate({im.costs[0], im.costs[1], im.costs[2]});
      } catch (const std::invalid_argument& e) {
        throw CLI::ValidationError("--costs", e.what());
      }
    }
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (parse->parsed()) return run_parse(gold_path, as_sent);
    if (apply->parsed()) return run_apply(gold_path, annotator);
    if (triples->parsed()) return run_triples(gold_path, annotator);
    if (stats->parsed()) return run_stats(gold_path, common);
    if (score_m2->parsed()) return run_score_m2(m2, common);
    if (score_im->parsed()) return run_score_imeasure(im, common);
    if (score_bleu->parsed()) return run_score_bleu(ng, common);
    if (score_gleu->parsed()) return run_score_gleu(ng, common);
    if (lattice->parsed()) return run_lattice(lattice_src, lattice_hyp, lattice_u);
  } catch (const InputError& e) {
    std::cerr << e.path;
    if (e.line > 0) std::cerr << ':' << e.line;
    std::cerr << ": " << e.kind << ": " << e.message << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "gec: error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitUsage;
}
