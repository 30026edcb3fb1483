// report.cc
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

#include "mlnorm/report.h"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <set>
#include <sstream>

#include "mlnorm/errors.h"

namespace mlnorm {

const ReportRow& EvalReport::Row(std::string_view name) const {
  for (const ReportRow& r : rows)
    if (r.name == name) return r;
  throw InputError("no report row '" + std::string(name) + "'");
}

std::size_t EvalReport::SystemIndex(std::string_view system) const {
  for (std::size_t i = 0; i < systems.size(); ++i)
    if (systems[i] == system) return i;
  throw InputError("unknown system '" + std::string(system) + "'");
}

std::optional<double> EvalReport::Accuracy(std::string_view system,
                                           std::string_view row) const {
  const std::size_t s = SystemIndex(system);
  return Row(row).accuracy[s];
}

namespace {

std::string Fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string Fold(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

std::string EvalReport::ToText() const {
  std::vector<std::vector<std::string>> cells;
  std::vector<std::string> header = {"", "No of, %"};
  header.insert(header.end(), systems.begin(), systems.end());
  cells.push_back(header);
  for (const ReportRow& r : rows) {
    std::vector<std::string> line;
    line.push_back(std::string(static_cast<std::size_t>(std::max(0, r.level - 1)) * 2, ' ') +
                   r.name);
    line.push_back(r.share ? Fixed(*r.share) : "");
    for (const auto& a : r.accuracy) line.push_back(a ? Fixed(100.0 * *a) : "-");
    cells.push_back(std::move(line));
  }
  std::vector<std::size_t> width(cells.front().size(), 0);
  for (const auto& line : cells)
    for (std::size_t c = 0; c < line.size(); ++c) width[c] = std::max(width[c], line[c].size());
  std::ostringstream out;
  for (const auto& line : cells) {
    for (std::size_t c = 0; c < line.size(); ++c) {
      if (c == 0) {
        out << line[c] << std::string(width[c] - line[c].size(), ' ');
      } else {
        out << "  " << std::string(width[c] - line[c].size(), ' ') << line[c];
      }
    }
    out << '\n';
  }
  return out.str();
}

std::string EvalReport::ToTsv() const {
  std::ostringstream out;
  out << "row\tlevel\tcount\tshare\tsystem\taccuracy\n";
  for (const ReportRow& r : rows)
    for (std::size_t s = 0; s < systems.size(); ++s) {
      char share[32] = "";
      if (r.share) std::snprintf(share, sizeof share, "%.6f", *r.share);
      char acc[32] = "";
      if (r.accuracy[s]) std::snprintf(acc, sizeof acc, "%.6f", 100.0 * *r.accuracy[s]);
      out << r.name << '\t' << r.level << '\t' << r.count << '\t' << share << '\t'
          << systems[s] << '\t' << acc << '\n';
    }
  return out.str();
}

EvalReport BreakdownReport(const TrainLexicon& lex, std::span<const LexiconEntry> test,
                           std::span<const NamedPredictions> systems,
                           ReportLayout layout, bool ignore_case) {
  if (test.empty()) throw InputError("empty test set");
  if (systems.empty()) throw InputError("no systems to report");
  std::set<std::string> seen_names;
  for (const NamedPredictions& s : systems) {
    if (!seen_names.insert(s.name).second)
      throw InputError("duplicate system '" + s.name + "'");
    if (s.predictions.size() != test.size())
      throw InputError("system '" + s.name + "' has " + std::to_string(s.predictions.size()) +
                       " predictions for " + std::to_string(test.size()) + " test items");
  }

  struct RowSpec {
    std::string name;
    int level;
    int parent;  // index of the row whose count is the share denominator
  };
  std::vector<RowSpec> specs;
  std::vector<std::vector<int>> membership(test.size());
  if (layout == ReportLayout::kCategories) {
    specs = {{"Total", 0, -1},  {"Unamb.", 1, 0},     {"New", 1, 0},
             {"Amb.", 1, 0},    {"POS-unamb.", 2, 3}, {"POS-amb.", 2, 3}};
    for (std::size_t i = 0; i < test.size(); ++i) {
      membership[i].push_back(0);
      switch (Categorize(lex, test[i].word)) {
        case Category::kUnique: membership[i].push_back(1); break;
        case Category::kNew: membership[i].push_back(2); break;
        case Category::kPosUnambiguous: membership[i].insert(membership[i].end(), {3, 4}); break;
        case Category::kPosAmbiguous: membership[i].insert(membership[i].end(), {3, 5}); break;
      }
    }
  } else {
    specs = {{"Total", 0, -1}, {"New morph.", 1, 0}, {"New comb.", 1, 0}, {"Seen", 1, 0}};
    for (std::size_t i = 0; i < test.size(); ++i) {
      membership[i].push_back(0);
      switch (CategorizeSegmentation(lex, test[i].word, test[i].target)) {
        case SegmentCategory::kNewMorphemes: membership[i].push_back(1); break;
        case SegmentCategory::kNewCombinations: membership[i].push_back(2); break;
        case SegmentCategory::kSeen: membership[i].push_back(3); break;
      }
    }
  }

  std::vector<std::size_t> count(specs.size(), 0);
  std::vector<std::vector<std::size_t>> correct(specs.size(),
                                                std::vector<std::size_t>(systems.size(), 0));
  for (std::size_t i = 0; i < test.size(); ++i) {
    const std::string gold = ignore_case ? Fold(test[i].target) : test[i].target;
    for (int r : membership[i]) {
      ++count[r];
      for (std::size_t s = 0; s < systems.size(); ++s) {
        const std::string& p = systems[s].predictions[i];
        if ((ignore_case ? Fold(p) : p) == gold) ++correct[r][s];
      }
    }
  }

  EvalReport report;
  report.total = test.size();
  for (const NamedPredictions& s : systems) report.systems.push_back(s.name);
  for (std::size_t r = 0; r < specs.size(); ++r) {
    ReportRow row;
    row.name = specs[r].name;
    row.level = specs[r].level;
    row.count = count[r];
    if (specs[r].parent >= 0) {
      const std::size_t denom = count[specs[r].parent];
      row.share = denom == 0 ? 0.0
                             : 100.0 * static_cast<double>(count[r]) / static_cast<double>(denom);
    }
    for (std::size_t s = 0; s < systems.size(); ++s) {
      if (count[r] == 0) {
        row.accuracy.push_back(std::nullopt);
      } else {
        row.accuracy.push_back(static_cast<double>(correct[r][s]) /
                               static_cast<double>(count[r]));
      }
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace mlnorm
