// corpus.cc
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mlnorm/corpus.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <unordered_map>

#include "mlnorm/errors.h"
#include "mlnorm/utf8.h"

namespace mlnorm {

std::size_t Corpus::token_count() const {
  std::size_t n = 0;
  for (const Segment& s : segments) n += s.tokens.size();
  return n;
}

bool Corpus::has_tags() const {
  for (const Segment& s : segments)
    for (const TokenRecord& t : s.tokens)
      if (!t.tags.empty()) return true;
  return false;
}

namespace {

[[noreturn]] void Fail(std::string_view source, std::size_t line, const std::string& what) {
  throw InputError(std::string(source) + ":" + std::to_string(line) + ": " + what);
}

void CheckText(std::string_view source, std::size_t line, std::string_view field,
               const std::string& text) {
  try {
    SplitChars(text);
  } catch (const InputError& e) {
    Fail(source, line, std::string(field) + ": " + e.what());
  }
}

}  // namespace

Corpus ParseCorpus(std::istream& in, std::string_view source_name) {
  Corpus corpus;
  std::unordered_map<std::string, std::size_t> segment_index;
  // Per segment: position -> line number, for duplicate and gap reports.
  std::vector<std::map<std::size_t, std::size_t>> positions;

  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (raw.empty()) continue;
    const std::vector<std::string> cols = SplitOn(raw, "\t");
    if (cols.size() != 4 && cols.size() != 5)
      Fail(source_name, line_no,
           "expected 4 or 5 tab-separated columns, found " + std::to_string(cols.size()));

    TokenRecord rec;
    rec.segment_id = cols[0];
    if (rec.segment_id.empty()) Fail(source_name, line_no, "empty segment id");
    const std::string& pos_text = cols[1];
    const auto [ptr, ec] =
        std::from_chars(pos_text.data(), pos_text.data() + pos_text.size(), rec.position);
    if (pos_text.empty() || ec != std::errc() || ptr != pos_text.data() + pos_text.size())
      Fail(source_name, line_no, "position '" + pos_text + "' is not a non-negative integer");
    rec.source = cols[2];
    rec.target = cols[3];
    if (rec.source.empty()) Fail(source_name, line_no, "empty source word");
    if (rec.target.empty()) Fail(source_name, line_no, "empty target");
    CheckText(source_name, line_no, "source", rec.source);
    CheckText(source_name, line_no, "target", rec.target);
    if (cols.size() == 5) {
      rec.pos_column = true;
      if (!cols[4].empty()) {
        rec.tags = SplitOn(cols[4], "+");
        for (const std::string& t : rec.tags)
          if (t.empty()) Fail(source_name, line_no, "empty atomic tag in '" + cols[4] + "'");
      }
    }

    auto [it, inserted] = segment_index.try_emplace(rec.segment_id, corpus.segments.size());
    if (inserted) {
      corpus.segments.push_back(Segment{rec.segment_id, {}});
      positions.emplace_back();
    }
    const std::size_t s = it->second;
    if (!positions[s].emplace(rec.position, line_no).second)
      Fail(source_name, line_no,
           "duplicate position " + std::to_string(rec.position) + " in segment '" +
               rec.segment_id + "' (first seen on line " +
               std::to_string(positions[s][rec.position]) + ")");
    corpus.segments[s].tokens.push_back(std::move(rec));
  }

  for (std::size_t s = 0; s < corpus.segments.size(); ++s) {
    std::size_t expected = 0;
    for (const auto& [position, line] : positions[s]) {
      if (position != expected)
        Fail(source_name, line,
             "segment '" + corpus.segments[s].id + "' is missing position " +
                 std::to_string(expected));
      ++expected;
    }
    auto& tokens = corpus.segments[s].tokens;
    std::sort(tokens.begin(), tokens.end(),
              [](const TokenRecord& a, const TokenRecord& b) { return a.position < b.position; });
  }
  return corpus;
}

Corpus LoadCorpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open corpus " + path.string());
  return ParseCorpus(in, path.string());
}

void WriteCorpus(std::ostream& out, const Corpus& corpus) {
  for (const Segment& s : corpus.segments)
    for (const TokenRecord& t : s.tokens) {
      out << t.segment_id << '\t' << t.position << '\t' << t.source << '\t' << t.target;
      if (t.pos_column) out << '\t' << TagLabel(t.tags);
      out << '\n';
    }
}

void SaveCorpus(const std::filesystem::path& path, const Corpus& corpus) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write corpus " + path.string());
  WriteCorpus(out, corpus);
  if (!out) throw InputError("error writing corpus " + path.string());
}

void CheckDisjoint(const DatasetSplit& split) {
  std::map<std::string, std::string> owner;
  const std::pair<const Corpus*, const char*> parts[] = {
      {&split.train, "train"}, {&split.dev, "dev"}, {&split.test, "test"}};
  for (const auto& [corpus, name] : parts)
    for (const Segment& s : corpus->segments) {
      const auto [it, inserted] = owner.emplace(s.id, name);
      if (!inserted)
        throw InputError("segment '" + s.id + "' appears in both " + it->second + " and " +
                         name);
    }
}

DatasetSplit LoadDataset(const std::filesystem::path& dir) {
  DatasetSplit split;
  split.train = LoadCorpus(dir / "train.tsv");
  if (std::filesystem::exists(dir / "dev.tsv")) split.dev = LoadCorpus(dir / "dev.tsv");
  if (std::filesystem::exists(dir / "test.tsv")) split.test = LoadCorpus(dir / "test.tsv");
  CheckDisjoint(split);
  return split;
}

ModelVocabularies BuildVocab(const Corpus& train, std::string_view boundary) {
  if (train.segments.empty()) throw InputError("empty training split");
  std::map<std::string, std::size_t> source_chars, target_chars, tags, labels;
  for (const Segment& s : train.segments)
    for (const TokenRecord& t : s.tokens) {
      for (std::string& c : SplitChars(t.source)) ++source_chars[std::move(c)];
      for (const std::string& piece : SplitOn(t.target, boundary))
        for (std::string& c : SplitChars(piece)) ++target_chars[std::move(c)];
      for (const std::string& tag : t.tags) ++tags[tag];
      if (!t.tags.empty()) ++labels[TagLabel(t.tags)];
    }
  ModelVocabularies v;
  v.source = BuildCharVocabulary(source_chars);
  v.target = BuildCharVocabulary(target_chars);
  v.tags = BuildTagVocabulary(tags);
  v.tag_labels = BuildTagVocabulary(labels);
  return v;
}

std::vector<ExampleGroup> ToExamples(const Corpus& corpus) {
  std::vector<ExampleGroup> groups;
  groups.reserve(corpus.segments.size());
  for (const Segment& s : corpus.segments) {
    std::vector<std::string> context;
    for (const TokenRecord& t : s.tokens) context.push_back(t.source);
    ExampleGroup group;
    for (const TokenRecord& t : s.tokens) {
      TrainingExample ex;
      ex.input.word = t.source;
      ex.input.tags = t.tags;
      ex.input.context = context;
      ex.input.focus = t.position;
      ex.target = t.target;
      group.push_back(std::move(ex));
    }
    groups.push_back(std::move(group));
  }
  return groups;
}

std::vector<LexiconEntry> ToLexiconEntries(const Corpus& corpus) {
  std::vector<LexiconEntry> out;
  for (const Segment& s : corpus.segments)
    for (const TokenRecord& t : s.tokens) out.push_back({t.source, TagLabel(t.tags), t.target});
  return out;
}

std::vector<std::string> Targets(const Corpus& corpus) {
  std::vector<std::string> out;
  for (const Segment& s : corpus.segments)
    for (const TokenRecord& t : s.tokens) out.push_back(t.target);
  return out;
}

}  // namespace mlnorm
