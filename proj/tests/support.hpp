// Copyright 2026 The bcc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BCC_TESTS_SUPPORT_HPP_
#define BCC_TESTS_SUPPORT_HPP_

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "bcc/ast.hpp"
#include "bcc/syntax.hpp"

namespace bcc::testing {

inline std::string SourcePath(const std::string& relative) {
  return std::string(BCC_SOURCE_DIR) + "/" + relative;
}

inline std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Program LoadCorpus(const std::string& name) {
  return ParseSexpr(ReadFile(SourcePath("tests/corpus/" + name + ".sexpr")));
}

}  // namespace bcc::testing

#endif  // BCC_TESTS_SUPPORT_HPP_
