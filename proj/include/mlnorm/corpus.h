// corpus.h
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

#ifndef MLNORM_CORPUS_H_
#define MLNORM_CORPUS_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "mlnorm/lexicon.h"
#include "mlnorm/model.h"
#include "mlnorm/trainer.h"

namespace mlnorm {

// One line of the TSV corpus: segmentId, position, source, target[, pos].
struct TokenRecord {
  std::string segment_id;
  std::size_t position = 0;
  std::string source;
  std::string target;
  std::vector<std::string> tags;  // atomic tags; composite tags split on '+'
  bool pos_column = false;        // the line carried a fifth column

  bool operator==(const TokenRecord&) const = default;
};

struct Segment {
  std::string id;
  std::vector<TokenRecord> tokens;  // ordered by position 0..n-1

  bool operator==(const Segment&) const = default;
};

struct Corpus {
  std::vector<Segment> segments;  // in order of first appearance

  std::size_t token_count() const;
  bool has_tags() const;
  bool operator==(const Corpus&) const = default;
};

// Throws InputError naming `source_name` and the line number on malformed
// input, duplicate (segmentId, position) pairs or gaps in a segment.
Corpus ParseCorpus(std::istream& in, std::string_view source_name = "<stream>");
Corpus LoadCorpus(const std::filesystem::path& path);
void WriteCorpus(std::ostream& out, const Corpus& corpus);
void SaveCorpus(const std::filesystem::path& path, const Corpus& corpus);

struct DatasetSplit {
  Corpus train;
  Corpus dev;
  Corpus test;
};

// Reads train.tsv and, when present, dev.tsv and test.tsv from `dir`.
// Segment ids must not be shared between splits.
DatasetSplit LoadDataset(const std::filesystem::path& dir);
void CheckDisjoint(const DatasetSplit& split);

// Character and tag vocabularies from the training split only.
ModelVocabularies BuildVocab(const Corpus& train, std::string_view boundary);

// Model-ready examples, one group per segment. Each word sees its whole
// segment as context.
std::vector<ExampleGroup> ToExamples(const Corpus& corpus);
std::vector<LexiconEntry> ToLexiconEntries(const Corpus& corpus);
std::vector<std::string> Targets(const Corpus& corpus);

}  // namespace mlnorm

#endif  // MLNORM_CORPUS_H_
