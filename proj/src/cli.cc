// cli.cc
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

#include "mlnorm/cli.h"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "mlnorm/config.h"
#include "mlnorm/corpus.h"
#include "mlnorm/errors.h"
#include "mlnorm/gradcheck_suite.h"
#include "mlnorm/lexicon.h"
#include "mlnorm/log.h"
#include "mlnorm/ngram.h"
#include "mlnorm/pipeline.h"
#include "mlnorm/report.h"
#include "mlnorm/scorer.h"
#include "mlnorm/trainer.h"
#include "mlnorm/tune.h"
#include "mlnorm/utf8.h"
#include "mlnorm/version.h"

namespace mlnorm {

namespace fs = std::filesystem;

namespace {

// Config file plus per-key flag overrides for one subcommand.
struct ConfigFlags {
  std::string config_file;
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;

  void Attach(CLI::App* app) {
    app->add_option("--config", config_file, "key = value config file")
        ->check(CLI::ExistingFile);
    for (const std::string& key : RunConfig::Keys()) {
      std::string flag = key;
      std::replace(flag.begin(), flag.end(), '_', '-');
      std::string names = "--" + flag;
      if (key == "lm_order") names += ",--order";
      if (key == "lm_smoothing") names += ",--smoothing";
      options[key] = app->add_option(names, values[key], "override config key " + key);
    }
  }

  bool Given(const std::string& key) const { return options.at(key)->count() > 0; }

  RunConfig Resolve() const {
    RunConfig cfg;
    if (!config_file.empty()) cfg.MergeFile(config_file);
    for (const auto& [key, opt] : options)
      if (opt->count() > 0) cfg.Set(key, values.at(key));
    cfg.Validate();
    return cfg;
  }
};

void Banner(const RunConfig& cfg) {
  std::cerr << "mlnorm " << kVersion << "\n" << cfg.ToString();
}

std::vector<std::string> ReadLines(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

void WriteLines(const std::string& path, const std::vector<std::string>& lines) {
  if (path.empty() || path == "-") {
    for (const std::string& l : lines) std::cout << l << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  for (const std::string& l : lines) out << l << '\n';
}

void RequireTags(const Corpus& corpus, Variant variant, std::string_view what) {
  if (!UsesPos(variant)) return;
  for (const Segment& s : corpus.segments)
    for (const TokenRecord& t : s.tokens)
      if (t.tags.empty())
        throw InputError(std::string(what) + ": variant " + std::string(VariantName(variant)) +
                         " needs POS tags, but segment '" + s.id + "' position " +
                         std::to_string(t.position) + " has none");
}

// lambda_nmt / lambda_lm from a tune output file.
FusionWeights ReadWeights(const fs::path& path) {
  FusionWeights w;
  for (const std::string& line : ReadLines(path)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    std::string key = line.substr(0, eq);
    key.erase(std::remove(key.begin(), key.end(), ' '), key.end());
    const double v = std::stod(line.substr(eq + 1));
    if (key == "lambda_nmt") w.nmt = v;
    else if (key == "lambda_lm") w.lm = v;
  }
  w.Validate();
  return w;
}

struct TrainArgs {
  ConfigFlags flags;
  std::string data, out;
};

int RunTrain(const TrainArgs& a) {
  const RunConfig cfg = a.flags.Resolve();
  Banner(cfg);
  const DatasetSplit split = LoadDataset(a.data);
  RequireTags(split.train, cfg.variant, "train");
  RequireTags(split.dev, cfg.variant, "dev");
  const std::string boundary = cfg.ResolvedBoundary();
  Seq2SeqModel prototype(cfg.variant, cfg.Dims(), BuildVocab(split.train, boundary), boundary);
  prototype.set_expected_pos_embedding(cfg.expected_pos_embedding);
  const std::vector<ExampleGroup> train = ToExamples(split.train);
  const std::vector<ExampleGroup> dev = ToExamples(split.dev);

  fs::create_directories(a.out);
  std::ofstream log(fs::path(a.out) / "train.log");
  log << "member\tepoch\ttrain_loss\tdev_accuracy\tbest_dev_accuracy\timproved\n";
  auto on_epoch = [&](const EpochRecord& r) {
    log << r.member << '\t' << r.epoch << '\t' << r.train_loss << '\t' << r.dev_accuracy
        << '\t' << r.best_dev_accuracy << '\t' << (r.improved ? 1 : 0) << '\n';
    log.flush();
    std::ostringstream msg;
    msg << "member " << r.member << " epoch " << r.epoch << " loss " << r.train_loss
        << " dev " << r.dev_accuracy;
    Log(LogLevel::kInfo, msg.str());
  };
  const std::vector<TrainOutcome> outcomes =
      TrainEnsemble(prototype, train, dev, cfg.Training(), cfg.Ensemble(), on_epoch);
  std::vector<Seq2SeqModel> members;
  for (const TrainOutcome& o : outcomes) {
    members.push_back(o.model);
    std::cout << "member\tbest_epoch=" << o.best_epoch
              << "\tbest_dev_accuracy=" << o.best_dev_accuracy << '\n';
  }
  SaveEnsemble(a.out, members);
  std::ofstream(fs::path(a.out) / "config.txt") << cfg.ToString();
  return 0;
}

struct DecodeArgs {
  ConfigFlags flags;
  std::string model, input, output, lm, weights;
  double lambda_nmt = 1.0;
  std::optional<double> lambda_lm;
};

int RunDecode(const DecodeArgs& a) {
  const RunConfig cfg = a.flags.Resolve();
  Banner(cfg);
  std::vector<Seq2SeqModel> members = LoadEnsemble(a.model);
  if (a.flags.Given("variant") && members.front().variant() != cfg.variant)
    throw ConfigError("--variant " + std::string(VariantName(cfg.variant)) +
                      " does not match the model's variant " +
                      std::string(VariantName(members.front().variant())));
  for (Seq2SeqModel& m : members) m.set_expected_pos_embedding(cfg.expected_pos_embedding);
  const Corpus input = LoadCorpus(a.input);
  RequireTags(input, members.front().variant(), "input");

  DecodeOptions opts;
  opts.beam_size = cfg.beam;
  opts.max_length = cfg.max_length;
  std::optional<lm::NgramModel> lm;
  if (!a.lm.empty()) {
    lm = lm::NgramModel::LoadFile(a.lm);
    opts.lm = &*lm;
    if (!a.weights.empty()) opts.weights = ReadWeights(a.weights);
    if (a.lambda_lm) opts.weights.lm = *a.lambda_lm;
    opts.weights.nmt = a.weights.empty() ? a.lambda_nmt : opts.weights.nmt;
    opts.weights.Validate();
  }
  std::vector<std::string> predictions;
  for (const ExampleGroup& group : ToExamples(input))
    for (const TrainingExample& ex : group)
      predictions.push_back(Normalize(members, ex.input, opts));
  WriteLines(a.output, predictions);
  return 0;
}

struct TuneArgs {
  ConfigFlags flags;
  std::string model, dev, lm, out;
  TuneConfig tune;
};

int RunTune(const TuneArgs& a) {
  const RunConfig cfg = a.flags.Resolve();
  Banner(cfg);
  const std::vector<Seq2SeqModel> members = LoadEnsemble(a.model);
  const Corpus dev = LoadCorpus(a.dev);
  RequireTags(dev, members.front().variant(), "dev");
  const lm::NgramModel lm = lm::NgramModel::LoadFile(a.lm);

  std::vector<std::unique_ptr<EnsembleScorer>> scorers;
  std::vector<TuneItem> items;
  for (const ExampleGroup& group : ToExamples(dev))
    for (const TrainingExample& ex : group) {
      scorers.push_back(std::make_unique<EnsembleScorer>(members, ex.input));
      items.push_back({scorers.back().get(), ex.target,
                       cfg.max_length.value_or(DefaultMaxLength(SplitChars(ex.input.word).size()))});
    }
  const Seq2SeqModel& first = members.front();
  const TuneResult r = TuneWeights(items, lm, first.vocab().target, first.boundary(), cfg.beam, a.tune);
  std::ostringstream text;
  text << "lambda_nmt = " << r.weights.nmt << "\nlambda_lm = " << r.weights.lm
       << "\ndev_accuracy = " << r.accuracy << "\n# trace: lambda_lm accuracy\n";
  for (const TunePoint& p : r.trace) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "trace\t%.4f\t%.6f\n", p.lambda_lm, p.accuracy);
    text << buf;
  }
  std::cout << text.str();
  if (!a.out.empty()) std::ofstream(a.out) << text.str();
  return 0;
}

struct EvaluateArgs {
  ConfigFlags flags;
  std::vector<std::string> systems;
  std::string train, test, tsv;
};

int RunEvaluate(const EvaluateArgs& a) {
  const RunConfig cfg = a.flags.Resolve();
  Banner(cfg);
  const std::vector<LexiconEntry> train = ToLexiconEntries(LoadCorpus(a.train));
  const std::vector<LexiconEntry> test = ToLexiconEntries(LoadCorpus(a.test));
  const TrainLexicon lex = TrainLexicon::Build(train, cfg.ResolvedBoundary());
  std::vector<NamedPredictions> systems;
  for (const std::string& path : a.systems)
    systems.push_back({fs::path(path).stem().string(), ReadLines(path)});
  const ReportLayout layout = cfg.task == Task::kSegmentation ? ReportLayout::kSegmentation
                                                              : ReportLayout::kCategories;
  const EvalReport report = BreakdownReport(lex, test, systems, layout, cfg.ignore_case);
  std::cout << report.ToText();
  if (!a.tsv.empty()) {
    std::ofstream out(a.tsv);
    if (!out) throw InputError("cannot write " + a.tsv);
    out << report.ToTsv();
  }
  return 0;
}

struct BaselineArgs {
  ConfigFlags flags;
  std::string train, test, output;
  bool no_tags = false;
};

int RunBaseline(const BaselineArgs& a) {
  const RunConfig cfg = a.flags.Resolve();
  Banner(cfg);
  const std::vector<LexiconEntry> train = ToLexiconEntries(LoadCorpus(a.train));
  const Corpus test_corpus = LoadCorpus(a.test);
  const std::vector<LexiconEntry> test = ToLexiconEntries(test_corpus);
  const TrainLexicon lex = TrainLexicon::Build(train, cfg.ResolvedBoundary());
  const bool use_tags = !a.no_tags && test_corpus.has_tags();
  std::vector<std::string> predictions, golds;
  for (const LexiconEntry& e : test) {
    predictions.push_back(BaselinePredict(
        lex, e.word, use_tags ? std::optional<std::string_view>(e.tag) : std::nullopt,
        cfg.seed));
    golds.push_back(e.target);
  }
  if (!a.output.empty()) WriteLines(a.output, predictions);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", 100.0 * WordAccuracy(predictions, golds, cfg.ignore_case));
  std::cout << "baseline word accuracy " << buf << "% on " << golds.size() << " words\n";
  return 0;
}

struct LmTrainArgs {
  ConfigFlags flags;
  std::vector<std::string> corpora, texts;
  std::string unit = "word", out, arpa;
};

int RunLmTrain(const LmTrainArgs& a) {
  const RunConfig cfg = a.flags.Resolve();
  Banner(cfg);
  if (a.corpora.empty() && a.texts.empty())
    throw ConfigError("lm-train needs at least one --corpus or --text file");
  const std::string boundary =
      a.flags.options.at("boundary")->count() > 0 ? cfg.ResolvedBoundary()
                                                  : (a.unit == "morpheme" ? "|" : " ");
  std::vector<std::string> lines;
  for (const std::string& c : a.corpora) {
    const std::vector<std::string> targets = Targets(LoadCorpus(c));
    lines.insert(lines.end(), targets.begin(), targets.end());
  }
  for (const std::string& t : a.texts) {
    const std::vector<std::string> text = ReadLines(t);
    lines.insert(lines.end(), text.begin(), text.end());
  }
  const lm::NgramModel lm = lm::NgramModel::Train(LmSentences(lines, boundary), cfg.LanguageModel());
  lm.SaveFile(a.out);
  if (!a.arpa.empty()) {
    std::ofstream out(a.arpa);
    if (!out) throw InputError("cannot write " + a.arpa);
    lm.WriteArpa(out);
  }
  std::cout << "trained " << cfg.lm_order << "-gram " << lm::SmoothingName(cfg.lm_smoothing)
            << " model over " << a.unit << "s\n";
  return 0;
}

struct GradCheckArgs {
  std::uint64_t seed = 7;
  double tolerance = 1e-4;
};

int RunGradCheck(const GradCheckArgs& a) {
  std::cerr << "mlnorm " << kVersion << "\n";
  bool ok = true;
  for (const GradCheckCase& c : RunGradCheckSuite(a.seed, a.tolerance)) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-4s %-36s max_rel_err=%.3e coords=%zu", c.passed ? "ok" : "FAIL",
                  c.name.c_str(), c.result.max_relative_error, c.result.coordinates);
    std::cout << buf;
    if (!c.passed)
      std::cout << " worst=" << c.result.worst_parameter << "[" << c.result.worst_index << "]";
    std::cout << '\n';
    ok = ok && c.passed;
  }
  return ok ? 0 : 1;
}

}  // namespace

int CliMain(int argc, const char* const* argv) {
  CLI::App app{"Character-level normalisation, lemmatisation and segmentation", "mlnorm"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "log progress to stderr");

  TrainArgs train;
  CLI::App* train_cmd = app.add_subcommand("train", "train an ensemble");
  train.flags.Attach(train_cmd);
  train_cmd->add_option("--data", train.data, "directory with train.tsv [dev.tsv]")->required();
  train_cmd->add_option("--out", train.out, "output directory")->required();

  DecodeArgs decode;
  CLI::App* decode_cmd = app.add_subcommand("decode", "decode a corpus");
  decode.flags.Attach(decode_cmd);
  decode_cmd->add_option("--model", decode.model, "model directory")->required();
  decode_cmd->add_option("--input", decode.input, "TSV corpus to decode")->required();
  decode_cmd->add_option("--output", decode.output, "prediction file (default stdout)");
  decode_cmd->add_option("--lm", decode.lm, "segment language model");
  decode_cmd->add_option("--weights", decode.weights, "weights written by tune");
  decode_cmd->add_option("--lambda-nmt", decode.lambda_nmt, "character model weight");
  decode_cmd->add_option("--lambda-lm", decode.lambda_lm, "language model weight");

  TuneArgs tune;
  CLI::App* tune_cmd = app.add_subcommand("tune", "tune fusion weights on dev data");
  tune.flags.Attach(tune_cmd);
  tune_cmd->add_option("--model", tune.model, "model directory")->required();
  tune_cmd->add_option("--dev", tune.dev, "dev TSV corpus")->required();
  tune_cmd->add_option("--lm", tune.lm, "segment language model")->required();
  tune_cmd->add_option("--out", tune.out, "weights file");
  tune_cmd->add_option("--lambda-max", tune.tune.lambda_max, "grid upper bound");
  tune_cmd->add_option("--grid-step", tune.tune.grid_step, "grid step");

  EvaluateArgs evaluate;
  CLI::App* evaluate_cmd = app.add_subcommand("evaluate", "accuracy breakdown by category");
  evaluate.flags.Attach(evaluate_cmd);
  evaluate_cmd->add_option("--systems", evaluate.systems, "prediction files")
      ->required()
      ->delimiter(',');
  evaluate_cmd->add_option("--train", evaluate.train, "training TSV")->required();
  evaluate_cmd->add_option("--test", evaluate.test, "test TSV")->required();
  evaluate_cmd->add_option("--tsv", evaluate.tsv, "machine-readable report");

  BaselineArgs baseline;
  CLI::App* baseline_cmd = app.add_subcommand("baseline", "POS lookup baseline");
  baseline.flags.Attach(baseline_cmd);
  baseline_cmd->add_option("--train", baseline.train, "training TSV")->required();
  baseline_cmd->add_option("--test", baseline.test, "test TSV")->required();
  baseline_cmd->add_option("--output", baseline.output, "prediction file");
  baseline_cmd->add_flag("--no-tags", baseline.no_tags, "ignore test tags");

  LmTrainArgs lm_train;
  CLI::App* lm_cmd = app.add_subcommand("lm-train", "train a segment language model");
  lm_train.flags.Attach(lm_cmd);
  lm_cmd->add_option("--corpus", lm_train.corpora, "TSV corpora whose targets are used");
  lm_cmd->add_option("--text", lm_train.texts, "raw target text, one unit sequence per line");
  lm_cmd->add_option("--unit", lm_train.unit, "morpheme or word")
      ->check(CLI::IsMember({"morpheme", "word"}));
  lm_cmd->add_option("--out", lm_train.out, "model file")->required();
  lm_cmd->add_option("--arpa", lm_train.arpa, "ARPA-style dump");

  GradCheckArgs gradcheck;
  CLI::App* gc_cmd = app.add_subcommand("gradcheck", "finite-difference gradient checks");
  gc_cmd->add_option("--seed", gradcheck.seed, "parameter seed");
  gc_cmd->add_option("--tolerance", gradcheck.tolerance, "max relative error");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }
  if (verbose) SetLogLevel(LogLevel::kInfo);

  try {
    if (*train_cmd) return RunTrain(train);
    if (*decode_cmd) return RunDecode(decode);
    if (*tune_cmd) return RunTune(tune);
    if (*evaluate_cmd) return RunEvaluate(evaluate);
    if (*baseline_cmd) return RunBaseline(baseline);
    if (*lm_cmd) return RunLmTrain(lm_train);
    if (*gc_cmd) return RunGradCheck(gradcheck);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace mlnorm
