// model.cc
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

#include "mlnorm/model.h"

#include <algorithm>
#include <array>
#include <sstream>

#include "mlnorm/errors.h"
#include "mlnorm/log.h"
#include "mlnorm/utf8.h"

namespace mlnorm {

using nn::Expr;
using nn::Graph;
using nn::LstmState;
using nn::Parameter;

namespace {

constexpr std::array<std::string_view, 5> kVariantNames = {
    "plain", "context", "gold_pos", "context_gold_pos", "context_predicted_pos"};

std::vector<double> Copy(const Graph& g, Expr e) {
  const auto v = g.Value(e);
  return {v.begin(), v.end()};
}

std::vector<Expr> Constants(Graph& g, const std::vector<std::vector<double>>& vs) {
  std::vector<Expr> out;
  out.reserve(vs.size());
  for (const auto& v : vs) out.push_back(g.Constant(v));
  return out;
}

std::size_t MetaSize(const nn::Checkpoint& ckpt, const std::string& key) {
  const auto it = ckpt.meta.find(key);
  if (it == ckpt.meta.end()) throw InputError("checkpoint lacks meta " + key);
  return static_cast<std::size_t>(std::stoull(it->second));
}

}  // namespace

std::string_view VariantName(Variant v) {
  return kVariantNames[static_cast<std::size_t>(v)];
}

Variant ParseVariant(std::string_view name) {
  for (std::size_t i = 0; i < kVariantNames.size(); ++i)
    if (kVariantNames[i] == name) return static_cast<Variant>(i);
  throw ConfigError("unknown variant '" + std::string(name) +
                    "' (expected plain|context|gold_pos|context_gold_pos|"
                    "context_predicted_pos)");
}

bool UsesContext(Variant v) {
  return v == Variant::kContext || v == Variant::kContextGoldPos ||
         v == Variant::kContextPredictedPos;
}

bool UsesPos(Variant v) {
  return v == Variant::kGoldPos || v == Variant::kContextGoldPos ||
         v == Variant::kContextPredictedPos;
}

bool PredictsPos(Variant v) { return v == Variant::kContextPredictedPos; }

void SourceInput::Validate() const {
  if (word.empty()) throw InputError("empty source word");
  if (!context.empty()) {
    if (focus >= context.size())
      throw InputError("focus index outside the context of '" + word + "'");
    if (context[focus] != word)
      throw InputError("context[focus] is '" + context[focus] +
                       "' but the source word is '" + word + "'");
  }
}

std::string TagLabel(std::span<const std::string> tags) {
  std::string out;
  for (std::size_t i = 0; i < tags.size(); ++i) {
    if (i) out += '+';
    out += tags[i];
  }
  return out;
}

Seq2SeqModel::Seq2SeqModel(Variant variant, const ModelDims& dims,
                           ModelVocabularies vocab, std::string boundary)
    : variant_(variant), dims_(dims), vocab_(std::move(vocab)),
      boundary_(std::move(boundary)) {
  if (dims.char_embedding == 0 || dims.hidden == 0 ||
      (UsesContext(variant) && dims.context_hidden == 0) ||
      (UsesPos(variant) && dims.pos_embedding == 0))
    throw ConfigError("model dimensions must be positive");
  if (vocab_.source.num_reserved() != 4 || vocab_.target.num_reserved() != 4)
    throw ConfigError("character vocabularies must carry the four reserved symbols");
  if (vocab_.tags.size() == 0) vocab_.tags = BuildTagVocabulary({});
  if (vocab_.tag_labels.size() == 0) vocab_.tag_labels = BuildTagVocabulary({});
  if (SplitChars(boundary_).size() != 1)
    throw ConfigError("segment boundary must be a single character");
  BuildEmbeddingMaps();

  const std::size_t E = dims.char_embedding, H = dims.hidden;
  std::size_t joint = 0;
  for (std::size_t r : source_rows_) joint = std::max(joint, r + 1);
  for (std::size_t r : target_rows_) joint = std::max(joint, r + 1);
  embeddings_ = Parameter("embed", {joint, E});
  encoder_fwd_ = nn::LstmCell("enc.fwd", E, H);
  encoder_bwd_ = nn::LstmCell("enc.bwd", E, H);
  bridge_h_w_ = Parameter("bridge.h.W", {H, 2 * H});
  bridge_h_b_ = Parameter("bridge.h.b", {H});
  bridge_c_w_ = Parameter("bridge.c.W", {H, 2 * H});
  bridge_c_b_ = Parameter("bridge.c.b", {H});
  decoder_ = nn::LstmCell("dec", E, H);
  attention_ = Parameter("attn.W", {H, 2 * H});
  if (UsesContext(variant)) {
    const std::size_t C = dims.context_hidden;
    context_lower_fwd_ = nn::LstmCell("ctx.lower.fwd", E, C);
    context_lower_bwd_ = nn::LstmCell("ctx.lower.bwd", E, C);
    context_upper_fwd_ = nn::LstmCell("ctx.upper.fwd", 2 * C, C);
    context_upper_bwd_ = nn::LstmCell("ctx.upper.bwd", 2 * C, C);
  }
  if (UsesPos(variant))
    pos_embeddings_ = Parameter("pos.embed", {vocab_.tags.size(), dims.pos_embedding});
  if (PredictsPos(variant))
    pos_classifier_ =
        Parameter("pos.W_f", {vocab_.tag_labels.size(), 2 * dims.context_hidden});
  output_w_ = Parameter("out.W", {vocab_.target.size(), OutputInputSize()});
  output_b_ = Parameter("out.b", {vocab_.target.size()});
}

void Seq2SeqModel::BuildEmbeddingMaps() {
  // Joint table: the source listing first, then target-only symbols. The
  // four reserved symbols coincide in both vocabularies.
  source_rows_.resize(vocab_.source.size());
  for (std::size_t i = 0; i < source_rows_.size(); ++i) source_rows_[i] = i;
  std::size_t next = vocab_.source.size();
  target_rows_.resize(vocab_.target.size());
  for (std::size_t i = 0; i < target_rows_.size(); ++i) {
    if (i < vocab_.target.num_reserved()) {
      target_rows_[i] = i;
      continue;
    }
    const auto hit = vocab_.source.Find(vocab_.target.Symbol(static_cast<int>(i)));
    target_rows_[i] = hit ? static_cast<std::size_t>(*hit) : next++;
  }
}

std::size_t Seq2SeqModel::OutputInputSize() const {
  std::size_t n = 3 * dims_.hidden;
  if (UsesPos(variant_)) n += dims_.pos_embedding;
  if (UsesContext(variant_)) n += 2 * dims_.context_hidden;
  return n;
}

void Seq2SeqModel::Init(std::uint64_t seed) {
  for (Parameter* p : Parameters()) {
    if (p->value.shape.size() == 2) {
      nn::GlorotInit(*p, seed);
    } else {
      p->value.Fill(0.0);
    }
    p->ZeroGrad();
  }
  for (nn::LstmCell* cell : {&encoder_fwd_, &encoder_bwd_, &decoder_,
                             &context_lower_fwd_, &context_lower_bwd_,
                             &context_upper_fwd_, &context_upper_bwd_})
    if (cell->hidden_size() > 0) cell->Init(seed);
}

std::vector<const Parameter*> Seq2SeqModel::Parameters() const {
  std::vector<const Parameter*> out = {&embeddings_};
  auto add_cell = [&](const nn::LstmCell& c) {
    if (c.hidden_size() == 0) return;
    out.push_back(&c.input_weights);
    out.push_back(&c.recurrent_weights);
    out.push_back(&c.bias);
  };
  add_cell(encoder_fwd_);
  add_cell(encoder_bwd_);
  for (const Parameter* p : {&bridge_h_w_, &bridge_h_b_, &bridge_c_w_, &bridge_c_b_})
    out.push_back(p);
  add_cell(decoder_);
  out.push_back(&attention_);
  add_cell(context_lower_fwd_);
  add_cell(context_lower_bwd_);
  add_cell(context_upper_fwd_);
  add_cell(context_upper_bwd_);
  if (UsesPos(variant_)) out.push_back(&pos_embeddings_);
  if (PredictsPos(variant_)) out.push_back(&pos_classifier_);
  out.push_back(&output_w_);
  out.push_back(&output_b_);
  return out;
}

std::vector<Parameter*> Seq2SeqModel::Parameters() {
  std::vector<Parameter*> out;
  for (const Parameter* p : std::as_const(*this).Parameters())
    out.push_back(const_cast<Parameter*>(p));
  return out;
}

Parameter* Seq2SeqModel::FindParameter(std::string_view name) {
  for (Parameter* p : Parameters())
    if (p->name == name) return p;
  return nullptr;
}

std::vector<Expr> Seq2SeqModel::EmbedChars(Graph& g,
                                           std::span<const int> source_ids) const {
  std::vector<Expr> out;
  out.reserve(source_ids.size());
  for (int id : source_ids) {
    if (id < 0 || static_cast<std::size_t>(id) >= source_rows_.size())
      throw InputError("source symbol index out of range");
    out.push_back(g.Lookup(embeddings_, source_rows_[id]));
  }
  return out;
}

Seq2SeqModel::BiLstmOutput Seq2SeqModel::RunBiLstm(
    Graph& g, const nn::LstmCell& fwd, const nn::LstmCell& bwd,
    const std::vector<Expr>& inputs) const {
  const std::size_t n = inputs.size();
  BiLstmOutput out;
  std::vector<Expr> forward(n), backward(n);
  LstmState s = fwd.ZeroState(g);
  for (std::size_t i = 0; i < n; ++i) {
    s = fwd.Step(g, inputs[i], s);
    forward[i] = s.h;
  }
  out.forward_final = s;
  s = bwd.ZeroState(g);
  for (std::size_t i = n; i-- > 0;) {
    s = bwd.Step(g, inputs[i], s);
    backward[i] = s.h;
  }
  out.backward_final = s;
  out.states.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::array<Expr, 2> parts = {forward[i], backward[i]};
    out.states.push_back(g.Concat(parts));
  }
  return out;
}

std::vector<Expr> Seq2SeqModel::Encode(Graph& g,
                                       std::span<const int> source_ids) const {
  if (source_ids.empty()) throw InputError("cannot encode an empty word");
  return RunBiLstm(g, encoder_fwd_, encoder_bwd_, EmbedChars(g, source_ids)).states;
}

ContextEncoding Seq2SeqModel::EncodeContext(
    Graph& g, std::span<const std::string> context) const {
  if (!UsesContext(variant_))
    throw ConfigError("variant " + std::string(VariantName(variant_)) +
                      " has no context encoder");
  if (context.empty()) throw InputError("empty context");
  ContextEncoding enc;
  for (const std::string& word : context) {
    const std::vector<int> ids = mlnorm::EncodeSource(vocab_.source, word);
    if (ids.empty()) throw InputError("empty word in context");
    const BiLstmOutput lower =
        RunBiLstm(g, context_lower_fwd_, context_lower_bwd_, EmbedChars(g, ids));
    const std::array<Expr, 2> ends = {lower.forward_final.h, lower.backward_final.h};
    enc.word_summaries.push_back(g.Concat(ends));
  }
  enc.states =
      RunBiLstm(g, context_upper_fwd_, context_upper_bwd_, enc.word_summaries).states;
  return enc;
}

Expr Seq2SeqModel::EmbedPos(Graph& g, std::span<const std::string> tags) const {
  if (!UsesPos(variant_))
    throw ConfigError("variant " + std::string(VariantName(variant_)) +
                      " has no POS embeddings");
  if (tags.empty()) throw InputError("POS feature with no tags");
  std::vector<std::size_t> rows;
  rows.reserve(tags.size());
  for (const std::string& t : tags) {
    const auto hit = vocab_.tags.Find(t);
    if (!hit) Log(LogLevel::kDebug, "unseen POS tag '" + t + "' mapped to UNK");
    rows.push_back(static_cast<std::size_t>(hit.value_or(vocab_.tags.unk())));
  }
  return g.MeanRows(pos_embeddings_, rows);
}

Expr Seq2SeqModel::PosLogits(Graph& g, Expr focus_encoding) const {
  if (!PredictsPos(variant_))
    throw ConfigError("variant " + std::string(VariantName(variant_)) +
                      " has no POS classifier");
  return g.MatVec(g.Leaf(pos_classifier_), focus_encoding);
}

Attention Seq2SeqModel::Attend(Graph& g, Expr decoder_state,
                               const EncodedSource& src) const {
  std::vector<Expr> scores;
  scores.reserve(src.keys.size());
  for (Expr k : src.keys) scores.push_back(g.Dot(decoder_state, k));
  Attention a;
  a.weights = g.Softmax(g.Concat(scores));
  a.context = g.WeightedSum(a.weights, src.states);
  return a;
}

StepOutput Seq2SeqModel::DecodeStep(Graph& g, const EncodedSource& src,
                                    LstmState state, int prev_symbol) const {
  if (prev_symbol < 0 || static_cast<std::size_t>(prev_symbol) >= target_rows_.size())
    throw InputError("previous target symbol out of range");
  if (src.pos.valid() != UsesPos(variant_) ||
      src.context.valid() != UsesContext(variant_))
    throw ConfigError("decoder inputs do not match variant " +
                      std::string(VariantName(variant_)));
  StepOutput out;
  Expr x = g.Lookup(embeddings_, target_rows_[prev_symbol]);
  out.state = decoder_.Step(g, x, state);
  out.attention = Attend(g, out.state.h, src);
  std::vector<Expr> parts = {out.state.h, out.attention.context};
  if (src.pos.valid()) parts.push_back(src.pos);
  if (src.context.valid()) parts.push_back(src.context);
  out.logits = g.Add(g.MatVec(g.Leaf(output_w_), g.Concat(parts)), g.Leaf(output_b_));
  return out;
}

const ContextEncoding& Seq2SeqModel::ResolveContext(Graph& g, const SourceInput& input,
                                                    const ContextEncoding* shared,
                                                    ContextEncoding& scratch) const {
  if (!input.has_context())
    throw InputError("variant " + std::string(VariantName(variant_)) +
                     " needs sentence context for '" + input.word + "'");
  if (shared != nullptr) {
    if (shared->states.size() != input.context.size())
      throw InputError("shared context encoding does not match the input");
    return *shared;
  }
  scratch = EncodeContext(g, input.context);
  return scratch;
}

EncodedSource Seq2SeqModel::EncodeSource(Graph& g, const SourceInput& input,
                                         PosSource pos_source,
                                         const ContextEncoding* shared_context) const {
  input.Validate();
  const std::vector<int> ids = mlnorm::EncodeSource(vocab_.source, input.word);
  const BiLstmOutput enc =
      RunBiLstm(g, encoder_fwd_, encoder_bwd_, EmbedChars(g, ids));
  EncodedSource src;
  src.states = enc.states;
  for (Expr h : src.states) src.keys.push_back(g.MatVec(g.Leaf(attention_), h));
  const std::array<Expr, 2> final_h = {enc.forward_final.h, enc.backward_final.h};
  const std::array<Expr, 2> final_c = {enc.forward_final.c, enc.backward_final.c};
  src.init.h = g.Add(g.MatVec(g.Leaf(bridge_h_w_), g.Concat(final_h)), g.Leaf(bridge_h_b_));
  src.init.c = g.Add(g.MatVec(g.Leaf(bridge_c_w_), g.Concat(final_c)), g.Leaf(bridge_c_b_));

  if (UsesContext(variant_)) {
    ContextEncoding scratch;
    src.context = ResolveContext(g, input, shared_context, scratch).states[input.focus];
  }
  if (UsesPos(variant_)) {
    if (PredictsPos(variant_) && pos_source != PosSource::kGold) {
      src.tag_logits = PosLogits(g, src.context);
      const auto logits = g.Value(src.tag_logits);
      if (pos_source == PosSource::kPredictedArgmax) {
        const int best = static_cast<int>(
            std::max_element(logits.begin(), logits.end()) - logits.begin());
        const std::vector<std::string> tags =
            SplitOn(vocab_.tag_labels.Symbol(best), "+");
        src.pos = EmbedPos(g, tags);
      } else {
        std::vector<Expr> embeds;
        for (const std::string& label : vocab_.tag_labels.symbols()) {
          const std::vector<std::string> tags = SplitOn(label, "+");
          embeds.push_back(EmbedPos(g, tags));
        }
        src.pos = g.WeightedSum(g.Softmax(src.tag_logits), embeds);
      }
    } else {
      if (input.tags.empty())
        throw InputError("variant " + std::string(VariantName(variant_)) +
                         " needs a POS tag for '" + input.word + "'");
      src.pos = EmbedPos(g, input.tags);
    }
  }
  return src;
}

Expr Seq2SeqModel::DecoderLoss(Graph& g, const EncodedSource& src,
                               std::string_view target) const {
  std::vector<int> y = EncodeTarget(vocab_.target, target, boundary_);
  if (y.empty()) throw InputError("empty target");
  y.push_back(kEos);
  LstmState state = src.init;
  int prev = kBos;
  Expr total;
  for (int symbol : y) {
    const StepOutput out = DecodeStep(g, src, state, prev);
    Expr nll = g.PickNegLogSoftmax(out.logits, static_cast<std::size_t>(symbol));
    total = total.valid() ? g.Add(total, nll) : nll;
    state = out.state;
    prev = symbol;
  }
  return total;
}

Expr Seq2SeqModel::SequenceLoss(Graph& g, const TrainingExample& ex,
                                const ContextEncoding* shared_context) const {
  const EncodedSource src = EncodeSource(g, ex.input, PosSource::kGold, shared_context);
  return DecoderLoss(g, src, ex.target);
}

Expr Seq2SeqModel::CombinedLoss(Graph& g, const TrainingExample& ex, double alpha,
                                const ContextEncoding* shared_context) const {
  if (!PredictsPos(variant_))
    throw ConfigError("combined loss needs the context_predicted_pos variant");
  if (!(alpha >= 0.0)) throw ConfigError("alpha must be >= 0");
  if (ex.input.tags.empty())
    throw InputError("combined loss needs a gold tag for '" + ex.input.word + "'");
  const EncodedSource src = EncodeSource(g, ex.input, PosSource::kGold, shared_context);
  Expr sequence = DecoderLoss(g, src, ex.target);
  const int label = vocab_.tag_labels.Index(TagLabel(ex.input.tags));
  Expr tagging = g.PickNegLogSoftmax(PosLogits(g, src.context),
                                     static_cast<std::size_t>(label));
  return g.Add(sequence, g.Scale(tagging, alpha));
}

Expr Seq2SeqModel::TrainingLoss(Graph& g, std::span<const TrainingExample> examples,
                                double alpha) const {
  if (examples.empty()) throw InputError("training loss over no examples");
  ContextEncoding shared;
  const ContextEncoding* shared_ptr = nullptr;
  if (UsesContext(variant_)) {
    const auto& ctx = examples.front().input.context;
    bool same = true;
    for (const TrainingExample& ex : examples) same = same && ex.input.context == ctx;
    if (same && !ctx.empty()) {
      shared = EncodeContext(g, ctx);
      shared_ptr = &shared;
    }
  }
  Expr total;
  for (const TrainingExample& ex : examples) {
    Expr loss = PredictsPos(variant_) ? CombinedLoss(g, ex, alpha, shared_ptr)
                                      : SequenceLoss(g, ex, shared_ptr);
    total = total.valid() ? g.Add(total, loss) : loss;
  }
  return total;
}

double Seq2SeqModel::SequenceLossValue(const TrainingExample& ex) const {
  Graph g;
  return g.Scalar(SequenceLoss(g, ex));
}

double Seq2SeqModel::CombinedLossValue(const TrainingExample& ex, double alpha) const {
  Graph g;
  return g.Scalar(CombinedLoss(g, ex, alpha));
}

PreparedSource Seq2SeqModel::Prepare(const SourceInput& input) const {
  PosSource pos_source = PosSource::kGold;
  if (PredictsPos(variant_))
    pos_source = expected_pos_ ? PosSource::kPredictedExpected
                               : PosSource::kPredictedArgmax;
  Graph g;
  const EncodedSource src = EncodeSource(g, input, pos_source);
  PreparedSource p;
  for (Expr h : src.states) p.states.push_back(Copy(g, h));
  for (Expr k : src.keys) p.keys.push_back(Copy(g, k));
  p.init_h = Copy(g, src.init.h);
  p.init_c = Copy(g, src.init.c);
  if (src.context.valid()) p.context = Copy(g, src.context);
  if (src.pos.valid()) p.pos = Copy(g, src.pos);
  if (src.tag_logits.valid()) {
    p.tag_distribution = nn::Softmax(g.Value(src.tag_logits));
    p.predicted_tag_label = static_cast<int>(
        std::max_element(p.tag_distribution.begin(), p.tag_distribution.end()) -
        p.tag_distribution.begin());
  }
  p.source_length = src.states.size();
  return p;
}

std::vector<double> Seq2SeqModel::StepDistribution(
    const PreparedSource& src, std::span<const double> h, std::span<const double> c,
    int prev_symbol, std::vector<double>* next_h, std::vector<double>* next_c) const {
  Graph g;
  EncodedSource enc;
  enc.states = Constants(g, src.states);
  enc.keys = Constants(g, src.keys);
  if (!src.context.empty()) enc.context = g.Constant(src.context);
  if (!src.pos.empty()) enc.pos = g.Constant(src.pos);
  const LstmState state{g.Constant({h.begin(), h.end()}),
                        g.Constant({c.begin(), c.end()})};
  const StepOutput out = DecodeStep(g, enc, state, prev_symbol);
  if (next_h) *next_h = Copy(g, out.state.h);
  if (next_c) *next_c = Copy(g, out.state.c);
  return nn::Softmax(g.Value(out.logits));
}

nn::Checkpoint Seq2SeqModel::ToCheckpoint() const {
  nn::Checkpoint ckpt;
  ckpt.meta["format"] = "seq2seq";
  ckpt.meta["variant"] = std::string(VariantName(variant_));
  ckpt.meta["boundary"] = boundary_;
  ckpt.meta["char_embedding"] = std::to_string(dims_.char_embedding);
  ckpt.meta["pos_embedding"] = std::to_string(dims_.pos_embedding);
  ckpt.meta["hidden"] = std::to_string(dims_.hidden);
  ckpt.meta["context_hidden"] = std::to_string(dims_.context_hidden);
  ckpt.meta["expected_pos_embedding"] = expected_pos_ ? "1" : "0";
  const std::pair<const char*, const Vocabulary*> vocabs[] = {
      {"source", &vocab_.source}, {"target", &vocab_.target},
      {"tags", &vocab_.tags}, {"tag_labels", &vocab_.tag_labels}};
  for (const auto& [name, v] : vocabs) {
    ckpt.vocabularies[name] = v->symbols();
    ckpt.meta[std::string(name) + "_hash"] = std::to_string(v->Hash());
  }
  for (const Parameter* p : Parameters()) ckpt.tensors[p->name] = p->value;
  return ckpt;
}

Seq2SeqModel Seq2SeqModel::FromCheckpoint(const nn::Checkpoint& ckpt) {
  const auto fmt = ckpt.meta.find("format");
  if (fmt == ckpt.meta.end() || fmt->second != "seq2seq")
    throw InputError("checkpoint does not hold a seq2seq model");
  ModelDims dims;
  dims.char_embedding = MetaSize(ckpt, "char_embedding");
  dims.pos_embedding = MetaSize(ckpt, "pos_embedding");
  dims.hidden = MetaSize(ckpt, "hidden");
  dims.context_hidden = MetaSize(ckpt, "context_hidden");
  auto vocab = [&](const std::string& name, std::size_t reserved) {
    const auto it = ckpt.vocabularies.find(name);
    if (it == ckpt.vocabularies.end())
      throw InputError("checkpoint lacks vocabulary " + name);
    Vocabulary v = Vocabulary::FromSymbols(it->second, reserved, kUnkSymbol);
    if (std::to_string(v.Hash()) != ckpt.meta.at(name + "_hash"))
      throw InputError("vocabulary hash mismatch for " + name);
    return v;
  };
  ModelVocabularies vocabs{vocab("source", 4), vocab("target", 4), vocab("tags", 1),
                           vocab("tag_labels", 1)};
  Seq2SeqModel model(ParseVariant(ckpt.meta.at("variant")), dims, std::move(vocabs),
                     ckpt.meta.at("boundary"));
  model.expected_pos_ = ckpt.meta.count("expected_pos_embedding") &&
                        ckpt.meta.at("expected_pos_embedding") == "1";
  const auto params = model.Parameters();
  if (params.size() != ckpt.tensors.size())
    throw InputError("checkpoint parameter set does not match the model");
  for (Parameter* p : params) {
    const auto it = ckpt.tensors.find(p->name);
    if (it == ckpt.tensors.end()) throw InputError("checkpoint lacks " + p->name);
    if (it->second.shape != p->value.shape)
      throw InputError("shape mismatch for " + p->name);
    p->value = it->second;
    p->ZeroGrad();
  }
  return model;
}

}  // namespace mlnorm
