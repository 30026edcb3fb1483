// utf8.h
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

#ifndef MLNORM_UTF8_H_
#define MLNORM_UTF8_H_

#include <string>
#include <string_view>
#include <vector>

namespace mlnorm {

// Splits UTF-8 text into Unicode scalar values, each returned as its own
// UTF-8 encoded string. No grapheme clustering. Throws InputError on
// malformed input.
std::vector<std::string> SplitChars(std::string_view text);

// Splits on `sep` (a single character, possibly multi-byte). Empty pieces
// are kept.
std::vector<std::string> SplitOn(std::string_view text, std::string_view sep);
std::string Join(const std::vector<std::string>& parts, std::string_view sep);

}  // namespace mlnorm

#endif  // MLNORM_UTF8_H_
