// model.h
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

#ifndef MLNORM_MODEL_H_
#define MLNORM_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mlnorm/nn/checkpoint.h"
#include "mlnorm/nn/graph.h"
#include "mlnorm/nn/lstm.h"
#include "mlnorm/nn/tensor.h"
#include "mlnorm/vocabulary.h"

namespace mlnorm {

// The five systems: plain NMT and its source-context extensions.
enum class Variant {
  kPlain,
  kContext,
  kGoldPos,
  kContextGoldPos,
  kContextPredictedPos,
};

std::string_view VariantName(Variant v);
Variant ParseVariant(std::string_view name);
bool UsesContext(Variant v);
bool UsesPos(Variant v);
bool PredictsPos(Variant v);

struct ModelDims {
  std::size_t char_embedding = 100;
  std::size_t pos_embedding = 50;
  std::size_t hidden = 200;
  std::size_t context_hidden = 200;
};

struct ModelVocabularies {
  Vocabulary source;      // characters of source words
  Vocabulary target;      // characters of targets, boundary mapped to SEG
  Vocabulary tags;        // atomic POS tags
  Vocabulary tag_labels;  // full (possibly composite) tags, classifier outputs
};

// One word to normalise, with whatever side information is available.
struct SourceInput {
  std::string word;
  std::vector<std::string> tags;     // atomic tags f_1..f_k; empty if none
  std::vector<std::string> context;  // enclosing segment; empty if none
  std::size_t focus = 0;             // context[focus] == word

  bool has_context() const { return !context.empty(); }
  void Validate() const;
};

struct TrainingExample {
  SourceInput input;
  std::string target;
};

// Joins atomic tags with '+' into the classifier label.
std::string TagLabel(std::span<const std::string> tags);

// Per-word encodings of a context segment: e^s (lower bi-LSTM summaries)
// and H^s (higher bi-LSTM states).
struct ContextEncoding {
  std::vector<nn::Expr> word_summaries;
  std::vector<nn::Expr> states;
};

// Everything the decoder attends to or is conditioned on for one word.
struct EncodedSource {
  std::vector<nn::Expr> states;  // h^x, one 2H vector per source character
  std::vector<nn::Expr> keys;    // W_a h_i
  nn::LstmState init;            // decoder start state
  nn::Expr context;              // H^x, invalid unless the variant uses it
  nn::Expr pos;                  // f_x embedding, invalid unless used
  nn::Expr tag_logits;           // W_f H^x, predicted-POS variant only
};

struct Attention {
  nn::Expr context;  // c_t
  nn::Expr weights;  // softmax over source positions
};

struct StepOutput {
  nn::Expr logits;
  nn::LstmState state;
  Attention attention;
};

// How the POS vector is obtained when encoding a word.
enum class PosSource { kGold, kPredictedArgmax, kPredictedExpected };

// Numeric snapshot of an EncodedSource, reusable across decoding steps.
struct PreparedSource {
  std::vector<std::vector<double>> states;
  std::vector<std::vector<double>> keys;
  std::vector<double> init_h;
  std::vector<double> init_c;
  std::vector<double> context;
  std::vector<double> pos;
  std::vector<double> tag_distribution;  // predicted-POS variant only
  int predicted_tag_label = -1;
  std::size_t source_length = 0;
};

// Character-level encoder-decoder with bilinear attention, optionally
// conditioned on a hierarchical context encoding and/or a POS embedding.
//
// Output layer input is concat(s_t, c_t [, f_x] [, H^x]) followed by an
// affine projection to |target| logits. Decoder state starts from an
// affine map of the final forward/backward encoder states. No input
// feeding: step t sees only s_{t-1} and y_{t-1}.
class Seq2SeqModel {
 public:
  Seq2SeqModel() = default;
  Seq2SeqModel(Variant variant, const ModelDims& dims, ModelVocabularies vocab,
               std::string boundary = " ");

  void Init(std::uint64_t seed);

  Variant variant() const { return variant_; }
  const ModelDims& dims() const { return dims_; }
  const ModelVocabularies& vocab() const { return vocab_; }
  const std::string& boundary() const { return boundary_; }
  std::size_t output_size() const { return vocab_.target.size(); }
  bool expected_pos_embedding() const { return expected_pos_; }
  void set_expected_pos_embedding(bool on) { expected_pos_ = on; }

  std::vector<nn::Parameter*> Parameters();
  std::vector<const nn::Parameter*> Parameters() const;
  nn::Parameter* FindParameter(std::string_view name);

  // Bi-LSTM over the characters of x; h_i = [forward_i ; backward_i].
  std::vector<nn::Expr> Encode(nn::Graph& g, std::span<const int> source_ids) const;
  ContextEncoding EncodeContext(nn::Graph& g,
                                std::span<const std::string> context) const;
  // Mean of the tag embeddings; unseen tags use the UNK-tag row.
  nn::Expr EmbedPos(nn::Graph& g, std::span<const std::string> tags) const;
  // Unnormalised scores W_f H^x over tag labels.
  nn::Expr PosLogits(nn::Graph& g, nn::Expr focus_encoding) const;
  Attention Attend(nn::Graph& g, nn::Expr decoder_state,
                   const EncodedSource& src) const;
  StepOutput DecodeStep(nn::Graph& g, const EncodedSource& src,
                        nn::LstmState state, int prev_symbol) const;

  // Encodes one word. `shared_context`, when given, must be the encoding
  // of input.context.
  EncodedSource EncodeSource(nn::Graph& g, const SourceInput& input,
                             PosSource pos_source,
                             const ContextEncoding* shared_context = nullptr) const;

  // -sum_t log p(y_t | y_<t, x, extras), EOS step included, using gold
  // tags for any POS input.
  nn::Expr SequenceLoss(nn::Graph& g, const TrainingExample& ex,
                        const ContextEncoding* shared_context = nullptr) const;
  // -[alpha log p(f_x | x, s) + sum_t log p(y_t | ...)]. Requires a
  // context-using variant and gold tags.
  nn::Expr CombinedLoss(nn::Graph& g, const TrainingExample& ex, double alpha,
                        const ContextEncoding* shared_context = nullptr) const;
  // The objective the variant trains on, summed over one segment whose
  // examples share a context (or over independent examples otherwise).
  nn::Expr TrainingLoss(nn::Graph& g, std::span<const TrainingExample> examples,
                        double alpha) const;

  double SequenceLossValue(const TrainingExample& ex) const;
  double CombinedLossValue(const TrainingExample& ex, double alpha) const;

  PreparedSource Prepare(const SourceInput& input) const;
  // Distribution over target symbols for one decoding step; writes the
  // next decoder state.
  std::vector<double> StepDistribution(const PreparedSource& src,
                                       std::span<const double> h,
                                       std::span<const double> c,
                                       int prev_symbol, std::vector<double>* next_h,
                                       std::vector<double>* next_c) const;

  nn::Checkpoint ToCheckpoint() const;
  static Seq2SeqModel FromCheckpoint(const nn::Checkpoint& ckpt);

 private:
  struct BiLstmOutput {
    std::vector<nn::Expr> states;
    nn::LstmState forward_final;
    nn::LstmState backward_final;
  };
  BiLstmOutput RunBiLstm(nn::Graph& g, const nn::LstmCell& fwd,
                         const nn::LstmCell& bwd,
                         const std::vector<nn::Expr>& inputs) const;
  std::vector<nn::Expr> EmbedChars(nn::Graph& g, std::span<const int> source_ids) const;
  void BuildEmbeddingMaps();
  std::size_t OutputInputSize() const;
  nn::Expr DecoderLoss(nn::Graph& g, const EncodedSource& src,
                       std::string_view target) const;
  const ContextEncoding& ResolveContext(nn::Graph& g, const SourceInput& input,
                                        const ContextEncoding* shared,
                                        ContextEncoding& scratch) const;

  Variant variant_ = Variant::kPlain;
  ModelDims dims_;
  ModelVocabularies vocab_;
  std::string boundary_ = " ";
  bool expected_pos_ = false;
  std::vector<std::size_t> source_rows_;
  std::vector<std::size_t> target_rows_;

  nn::Parameter embeddings_;  // shared by source and target characters
  nn::LstmCell encoder_fwd_;
  nn::LstmCell encoder_bwd_;
  nn::Parameter bridge_h_w_, bridge_h_b_, bridge_c_w_, bridge_c_b_;
  nn::LstmCell decoder_;
  nn::Parameter attention_;  // W_a [H x 2H]
  nn::Parameter output_w_, output_b_;
  // Source context.
  nn::LstmCell context_lower_fwd_, context_lower_bwd_;
  nn::LstmCell context_upper_fwd_, context_upper_bwd_;
  nn::Parameter pos_embeddings_;
  nn::Parameter pos_classifier_;  // W_f
};

}  // namespace mlnorm

#endif  // MLNORM_MODEL_H_
