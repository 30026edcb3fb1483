// checkpoint.cc
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

#include "mlnorm/nn/checkpoint.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "mlnorm/errors.h"

namespace mlnorm::nn {

namespace {

constexpr const char* kMagic = "mlnorm-checkpoint";
constexpr int kVersion = 1;

std::string HexFloat(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%a", v);
  return buf;
}

double ParseDouble(const std::string& tok) {
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end == tok.c_str() || *end != '\0')
    throw InputError("checkpoint: bad number '" + tok + "'");
  return v;
}

std::string NextLine(std::istream& in, const char* what) {
  std::string line;
  if (!std::getline(in, line))
    throw InputError(std::string("checkpoint: truncated while reading ") + what);
  return line;
}

}  // namespace

std::string EscapeToken(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case ' ': out += "\\s"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      default: out += c;
    }
  }
  if (out.empty()) out = "\\0";
  return out;
}

std::string UnescapeToken(std::string_view s) {
  if (s == "\\0") return {};
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '\\') {
      out += s[i];
      continue;
    }
    if (++i == s.size()) throw InputError("dangling escape in token");
    switch (s[i]) {
      case '\\': out += '\\'; break;
      case 's': out += ' '; break;
      case 't': out += '\t'; break;
      case 'n': out += '\n'; break;
      default: throw InputError("unknown escape in token");
    }
  }
  return out;
}

void WriteCheckpoint(std::ostream& out, const Checkpoint& ckpt) {
  out << kMagic << ' ' << kVersion << '\n';
  out << "precision " << ckpt.precision << '\n';
  for (const auto& [k, v] : ckpt.meta)
    out << "meta " << EscapeToken(k) << ' ' << EscapeToken(v) << '\n';
  for (const auto& [name, symbols] : ckpt.vocabularies) {
    out << "vocab " << EscapeToken(name) << ' ' << symbols.size() << '\n';
    for (const std::string& s : symbols) out << EscapeToken(s) << '\n';
  }
  for (const auto& [name, t] : ckpt.tensors) {
    out << "param " << EscapeToken(name) << ' ' << t.shape.size();
    for (std::size_t d : t.shape) out << ' ' << d;
    out << '\n';
    for (std::size_t i = 0; i < t.data.size(); ++i)
      out << (i == 0 ? "" : " ") << HexFloat(t.data[i]);
    out << '\n';
  }
  out << "end\n";
}

Checkpoint ReadCheckpoint(std::istream& in) {
  Checkpoint ckpt;
  {
    std::istringstream head(NextLine(in, "header"));
    std::string magic;
    int version = 0;
    head >> magic >> version;
    if (magic != kMagic || version != kVersion)
      throw InputError("checkpoint: unrecognised header");
  }
  while (true) {
    std::istringstream line(NextLine(in, "record"));
    std::string kind;
    line >> kind;
    if (kind == "end") break;
    if (kind == "precision") {
      line >> ckpt.precision;
      if (ckpt.precision != "f64")
        throw InputError("checkpoint: unsupported precision " + ckpt.precision);
    } else if (kind == "meta") {
      std::string k, v;
      line >> k >> v;
      ckpt.meta[UnescapeToken(k)] = UnescapeToken(v);
    } else if (kind == "vocab") {
      std::string name;
      std::size_t n = 0;
      line >> name >> n;
      auto& symbols = ckpt.vocabularies[UnescapeToken(name)];
      for (std::size_t i = 0; i < n; ++i)
        symbols.push_back(UnescapeToken(NextLine(in, "vocabulary")));
    } else if (kind == "param") {
      std::string name;
      std::size_t rank = 0;
      line >> name >> rank;
      std::vector<std::size_t> shape(rank);
      for (auto& d : shape) line >> d;
      if (!line) throw InputError("checkpoint: bad param header for " + name);
      Tensor t(shape);
      std::istringstream values(NextLine(in, "values"));
      std::string tok;
      std::size_t i = 0;
      while (values >> tok) {
        if (i >= t.data.size())
          throw InputError("checkpoint: too many values for " + name);
        t.data[i++] = ParseDouble(tok);
      }
      if (i != t.data.size())
        throw InputError("checkpoint: too few values for " + name);
      ckpt.tensors[UnescapeToken(name)] = std::move(t);
    } else {
      throw InputError("checkpoint: unknown record '" + kind + "'");
    }
  }
  return ckpt;
}

void SaveCheckpoint(const std::string& path, const Checkpoint& ckpt) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  WriteCheckpoint(out, ckpt);
  if (!out) throw InputError("write failed: " + path);
}

Checkpoint LoadCheckpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path);
  return ReadCheckpoint(in);
}

}  // namespace mlnorm::nn
