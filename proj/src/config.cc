// config.cc
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

#include "mlnorm/config.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include "mlnorm/errors.h"

namespace mlnorm {

namespace {

std::string_view Trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::size_t ToSize(std::string_view key, std::string_view v) {
  std::size_t out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || p != v.data() + v.size())
    throw ConfigError(std::string(key) + ": expected a non-negative integer, got '" +
                      std::string(v) + "'");
  return out;
}

double ToDouble(std::string_view key, std::string_view v) {
  const std::string s(v);
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (s.empty() || used != s.size() || !std::isfinite(out))
    throw ConfigError(std::string(key) + ": expected a number, got '" + s + "'");
  return out;
}

bool ToBool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(std::string(key) + ": expected true or false, got '" + std::string(v) +
                    "'");
}

}  // namespace

const std::vector<std::string>& RunConfig::Keys() {
  static const std::vector<std::string> keys = {
      "task",       "variant",   "char_emb",      "pos_emb",    "hidden",
      "ensemble",   "max_epochs", "patience",     "alpha",      "beam",
      "lm_order",   "lm_smoothing", "learning_rate", "clip_norm", "seed",
      "threads",    "boundary",  "max_length",    "expected_pos", "ignore_case"};
  return keys;
}

void RunConfig::Set(std::string_view key, std::string_view value) {
  value = Trim(value);
  if (key == "task") task = ParseTask(value);
  else if (key == "variant") variant = ParseVariant(value);
  else if (key == "char_emb") char_embedding = ToSize(key, value);
  else if (key == "pos_emb") pos_embedding = ToSize(key, value);
  else if (key == "hidden") hidden = ToSize(key, value);
  else if (key == "ensemble") ensemble = ToSize(key, value);
  else if (key == "max_epochs") max_epochs = ToSize(key, value);
  else if (key == "patience") patience = ToSize(key, value);
  else if (key == "alpha") alpha = ToDouble(key, value);
  else if (key == "beam") beam = ToSize(key, value);
  else if (key == "lm_order") lm_order = ToSize(key, value);
  else if (key == "lm_smoothing") lm_smoothing = lm::ParseSmoothing(value);
  else if (key == "learning_rate") learning_rate = ToDouble(key, value);
  else if (key == "clip_norm") {
    if (value == "none") clip_norm.reset();
    else clip_norm = ToDouble(key, value);
  } else if (key == "seed") seed = ToSize(key, value);
  else if (key == "threads") threads = ToSize(key, value);
  else if (key == "boundary") {
    // Quotes allow a space boundary: boundary = " "
    std::string b(value);
    if (b.size() >= 2 && b.front() == '"' && b.back() == '"') b = b.substr(1, b.size() - 2);
    if (b.empty()) throw ConfigError("boundary: must not be empty");
    boundary = b;
  } else if (key == "max_length") {
    if (value == "auto") max_length.reset();
    else max_length = ToSize(key, value);
  }
  else if (key == "expected_pos") expected_pos_embedding = ToBool(key, value);
  else if (key == "ignore_case") ignore_case = ToBool(key, value);
  else throw ConfigError("unknown config key '" + std::string(key) + "'");
}

void RunConfig::MergeStream(std::istream& in, std::string_view source_name) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    const auto hash = view.find('#');
    // A '#' inside a quoted boundary value is kept.
    if (hash != std::string_view::npos && view.find('"') == std::string_view::npos)
      view = view.substr(0, hash);
    view = Trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError(std::string(source_name) + ":" + std::to_string(line_no) +
                        ": expected 'key = value'");
    try {
      Set(Trim(view.substr(0, eq)), view.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(std::string(source_name) + ":" + std::to_string(line_no) + ": " +
                        e.what());
    }
  }
}

void RunConfig::MergeFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  MergeStream(in, path.string());
}

void RunConfig::Validate() const {
  if (char_embedding == 0 || hidden == 0) throw ConfigError("dimensions must be positive");
  if (UsesPos(variant) && pos_embedding == 0)
    throw ConfigError("pos_emb must be positive for POS variants");
  if (ensemble == 0) throw ConfigError("ensemble must be >= 1");
  if (beam == 0) throw ConfigError("beam must be >= 1");
  if (lm_order == 0) throw ConfigError("lm_order must be >= 1");
  if (alpha < 0.0) throw ConfigError("alpha must be >= 0");
  if (threads == 0) throw ConfigError("threads must be >= 1");
  if (task == Task::kSegmentation && UsesContext(variant))
    throw ConfigError("variant " + std::string(VariantName(variant)) +
                      " needs sentence context, which segmentation data does not have");
  Training().sgd.Validate();
}

std::size_t RunConfig::ResolvedMaxEpochs() const {
  return max_epochs.value_or(DefaultMaxEpochs(task));
}

std::string RunConfig::ResolvedBoundary() const {
  return boundary.value_or(DefaultBoundary(task));
}

ModelDims RunConfig::Dims() const {
  ModelDims d;
  d.char_embedding = char_embedding;
  d.pos_embedding = pos_embedding;
  d.hidden = hidden;
  d.context_hidden = hidden;
  return d;
}

TrainConfig RunConfig::Training() const {
  TrainConfig t;
  t.max_epochs = ResolvedMaxEpochs();
  t.patience = patience;
  t.alpha = alpha;
  t.sgd.learning_rate = learning_rate;
  t.sgd.clip_norm = clip_norm;
  return t;
}

EnsembleConfig RunConfig::Ensemble() const {
  EnsembleConfig e;
  e.size = ensemble;
  e.base_seed = seed;
  e.threads = threads;
  return e;
}

lm::NgramOptions RunConfig::LanguageModel() const {
  lm::NgramOptions o;
  o.order = lm_order;
  o.smoothing = lm_smoothing;
  return o;
}

std::string RunConfig::ToString() const {
  std::ostringstream out;
  out << "task = " << TaskName(task) << '\n'
      << "variant = " << VariantName(variant) << '\n'
      << "char_emb = " << char_embedding << '\n'
      << "pos_emb = " << pos_embedding << '\n'
      << "hidden = " << hidden << '\n'
      << "ensemble = " << ensemble << '\n'
      << "max_epochs = " << ResolvedMaxEpochs() << '\n'
      << "patience = " << patience << '\n'
      << "alpha = " << alpha << '\n'
      << "beam = " << beam << '\n'
      << "lm_order = " << lm_order << '\n'
      << "lm_smoothing = " << lm::SmoothingName(lm_smoothing) << '\n'
      << "learning_rate = " << learning_rate << '\n'
      << "clip_norm = " << (clip_norm ? std::to_string(*clip_norm) : "none") << '\n'
      << "seed = " << seed << '\n'
      << "threads = " << threads << '\n'
      << "boundary = \"" << ResolvedBoundary() << "\"\n"
      << "max_length = " << (max_length ? std::to_string(*max_length) : "auto") << '\n'
      << "expected_pos = " << (expected_pos_embedding ? "true" : "false") << '\n'
      << "ignore_case = " << (ignore_case ? "true" : "false") << '\n';
  return out.str();
}

}  // namespace mlnorm
