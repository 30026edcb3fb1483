// report.h
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

#ifndef MLNORM_REPORT_H_
#define MLNORM_REPORT_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mlnorm/lexicon.h"

namespace mlnorm {

struct NamedPredictions {
  std::string name;
  std::vector<std::string> predictions;
};

enum class ReportLayout {
  kCategories,    // Total / Unamb. / New / Amb. / POS-unamb. / POS-amb.
  kSegmentation,  // Total / New morph. / New comb. / Seen
};

struct ReportRow {
  std::string name;
  // 0 = Total, 1 = partition of the test set, 2 = partition of Amb.
  int level = 0;
  std::size_t count = 0;
  // Percent of the parent partition; the Total row carries none.
  std::optional<double> share;
  // One entry per system; empty when the row has no items.
  std::vector<std::optional<double>> accuracy;
};

struct EvalReport {
  std::vector<std::string> systems;
  std::vector<ReportRow> rows;
  std::size_t total = 0;

  const ReportRow& Row(std::string_view name) const;  // InputError if absent
  std::size_t SystemIndex(std::string_view system) const;  // InputError if absent
  std::optional<double> Accuracy(std::string_view system, std::string_view row) const;

  // Aligned table: rows as in the published tables, systems as columns.
  std::string ToText() const;
  // Tab-separated long format: row, level, count, share, system, accuracy.
  std::string ToTsv() const;
};

// Every system must hold one prediction per test item.
EvalReport BreakdownReport(const TrainLexicon& lex, std::span<const LexiconEntry> test,
                           std::span<const NamedPredictions> systems,
                           ReportLayout layout, bool ignore_case = false);

}  // namespace mlnorm

#endif  // MLNORM_REPORT_H_
