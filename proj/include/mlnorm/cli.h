// cli.h
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

#ifndef MLNORM_CLI_H_
#define MLNORM_CLI_H_

namespace mlnorm {

// Entry point of the mlnorm tool. Returns 0 on success, 2 on a usage error
// and 1 on any other failure.
int CliMain(int argc, const char* const* argv);

}  // namespace mlnorm

#endif  // MLNORM_CLI_H_
