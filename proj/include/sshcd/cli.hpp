// Copyright 2026 the sshcd authors
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

#pragma once

#include <string>
#include <vector>

namespace sshcd {

/// Entry point shared by the binary and the tests. Returns the process exit
/// code: 0 success, 2 validation error, 3 numerical failure.
int run_cli(const std::vector<std::string>& args);

}  // namespace sshcd
