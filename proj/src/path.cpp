// Copyright 2026 The Jamus Authors
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

#include "jamus/path.hpp"

#include <vector>

namespace jamus {

std::optional<std::string> normalize_path(std::string_view path) {
  if (path.empty()) return std::nullopt;

  std::string root;
  std::string_view rest;
  if (path[0] == '/') {
    root = "/";
    rest = path.substr(1);
  } else if (path[0] == '~') {
    if (path.size() > 1 && path[1] != '/') return std::nullopt;
    root = "~";
    rest = path.size() > 1 ? path.substr(2) : std::string_view{};
  } else {
    return std::nullopt;  // relative paths have no meaning in the namespace
  }

  std::vector<std::string_view> segments;
  while (!rest.empty()) {
    auto slash = rest.find('/');
    std::string_view seg = rest.substr(0, slash);
    rest = slash == std::string_view::npos ? std::string_view{}
                                           : rest.substr(slash + 1);
    if (seg.empty() || seg == ".") continue;  // collapse "//" and "."
    if (seg == "..") return std::nullopt;     // never escapes the namespace
    segments.push_back(seg);
  }

  std::string out = root;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    if (i > 0 || root != "/") out += '/';
    out.append(segments[i]);
  }
  return out;
}

bool is_canonical_path(std::string_view path) {
  auto norm = normalize_path(path);
  return norm && *norm == path;
}

bool path_has_prefix(std::string_view path, std::string_view prefix) {
  if (path == prefix) return true;
  if (prefix == "/") return !path.empty() && path[0] == '/';
  if (prefix == "~")
    return path.size() >= 2 && path[0] == '~' && path[1] == '/';
  if (path.size() <= prefix.size()) return false;
  return path.substr(0, prefix.size()) == prefix && path[prefix.size()] == '/';
}

}  // namespace jamus
