#include <algorithm>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "gec/imeasure.hpp"

namespace gec::imeasure {

namespace {

namespace pt = boost::property_tree;

m2::ActionKind infer_action(std::size_t width, const Tokens& correction) {
  if (width == 0) return m2::ActionKind::AddBefore;
  if (width == 1) {
    if (correction.empty()) return m2::ActionKind::Delete;
    return correction.size() > 1 ? m2::ActionKind::Split : m2::ActionKind::Edit;
  }
  return correction.size() == 1 ? m2::ActionKind::Merge : m2::ActionKind::Other;
}

std::size_t read_offset(const pt::ptree& node, const char* name, const std::string& where) {
  auto value = node.get_optional<long long>(std::string("<xmlattr>.") + name);
  if (!value || *value < 0) {
    throw m2::M2Error(m2::ErrorKind::MalformedLine, 0, where + ": <c> needs a non-negative '" + name + "'");
  }
  return static_cast<std::size_t>(*value);
}

}  // namespace

std::vector<m2::AnnotationBlock> read_gold_xml(const std::string& xml, int annotator) {
  pt::ptree tree;
  std::istringstream in(xml);
  try {
    pt::read_xml(in, tree, pt::xml_parser::trim_whitespace);
  } catch (const pt::xml_parser_error& e) {
    throw m2::M2Error(m2::ErrorKind::MalformedLine, e.line(), e.message());
  }

  auto scripts = tree.get_child_optional("scripts");
  if (!scripts) throw m2::M2Error(m2::ErrorKind::MalformedLine, 0, "missing <scripts> root");

  std::vector<m2::AnnotationBlock> blocks;
  for (const auto& [script_tag, script] : *scripts) {
    if (script_tag != "script") continue;
    const std::string script_id = script.get<std::string>("<xmlattr>.id", std::to_string(blocks.size() + 1));
    for (const auto& [sentence_tag, sentence] : script) {
      if (sentence_tag != "sentence") continue;
      m2::AnnotationBlock block;
      block.id = script_id + "-" + sentence.get<std::string>("<xmlattr>.id", "?");
      block.source = split_tokens(sentence.get<std::string>("text", ""));
      if (block.source.empty()) {
        throw m2::M2Error(m2::ErrorKind::EmptyBlock, 0, "sentence " + block.id + " has no text");
      }
      if (auto errors = sentence.get_child_optional("error-list")) {
        for (const auto& [error_tag, error] : *errors) {
          if (error_tag != "error") continue;
          for (const auto& [alt_tag, alt] : error) {
            if (alt_tag != "alt" || alt.get<int>("<xmlattr>.ann", 0) != annotator) continue;
            for (const auto& [c_tag, c] : alt) {
              if (c_tag != "c") continue;
              m2::Edit edit;
              edit.start = read_offset(c, "start", block.id);
              edit.end = read_offset(c, "end", block.id);
              edit.correction = normalize_space(c.get_value<std::string>());
              edit.annotator = annotator;
              if (edit.start <= edit.end) {
                edit.action = infer_action(edit.end - edit.start, split_tokens(edit.correction));
              }
              m2::validate_edit(edit, block.source.size());
              block.edits.push_back(std::move(edit));
            }
          }
        }
      }
      std::stable_sort(block.edits.begin(), block.edits.end(), [](const m2::Edit& a, const m2::Edit& b) {
        return std::pair(a.start, a.end) < std::pair(b.start, b.end);
      });
      blocks.push_back(std::move(block));
    }
  }
  return blocks;
}

}  // namespace gec::imeasure
