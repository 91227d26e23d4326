// Copyright (c) the hvpf authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef HVPF_CLI_HPP_
#define HVPF_CLI_HPP_

namespace hvpf {

// Entry point for the hvpf tool. Exit codes: 0 success, 1 internal error,
// 2 input/validation error.
int run_cli(int argc, const char* const* argv);

}  // namespace hvpf

#endif  // HVPF_CLI_HPP_
