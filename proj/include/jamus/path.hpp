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

#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace jamus {

// Virtual paths are rooted either at "/" (absolute) or at "~" (the
// component's home namespace). "~" is symbolic: each container owns its own
// namespace, so no expansion to a real directory ever happens.
//
// Canonical form: root prefix plus "/"-joined segments, no "." or ".."
// segments, no empty segments, no trailing separator except the bare roots
// "/" and "~".

/// Returns the canonical form of `path`, or nullopt when the path cannot be
/// canonicalized (contains "..", is relative, or has empty/dot segments
/// beyond redundant separators).
std::optional<std::string> normalize_path(std::string_view path);

/// True iff `path` is already in canonical form.
bool is_canonical_path(std::string_view path);

/// Segment-aware prefix test on canonical paths: true iff `path` equals
/// `prefix` or lies underneath it. Never a plain substring test, so
/// "~/.jmailer" does not cover "~/.jmailerX".
bool path_has_prefix(std::string_view path, std::string_view prefix);

}  // namespace jamus
