// Copyright 2026 The pepper Authors.
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

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "pepper/textproc/token.hpp"

namespace pepper {

inline constexpr size_t kMaxElongationCandidates = 64;

// Candidate normal forms of an expressively elongated word ("hoooottt").
// Every run of two or more identical letters may be kept, shortened to two
// or shortened to one; runs of exactly two are kept or shortened to one.
// The word itself is always a member. Enumeration is deterministic and the
// two extreme forms (every run at one, every run at two) are always present
// before the cap applies.
inline std::set<std::string> normalize_elongation(std::string_view word) {
  struct Run {
    char c;
    size_t len;
  };
  std::vector<Run> runs;
  for (char c : word) {
    if (!runs.empty() && runs.back().c == c && is_ascii_letter(c))
      ++runs.back().len;
    else
      runs.push_back({c, 1});
  }
  std::vector<size_t> variable;  // indices of runs with len >= 2
  for (size_t i = 0; i < runs.size(); ++i)
    if (runs[i].len >= 2 && is_ascii_letter(runs[i].c)) variable.push_back(i);

  std::set<std::string> out;
  out.emplace(word);
  if (variable.empty()) return out;

  auto render = [&](uint64_t mask) {
    // bit set -> collapse run to 1, clear -> collapse to min(len, 2)
    std::string s;
    size_t v = 0;
    for (size_t i = 0; i < runs.size(); ++i) {
      size_t len = runs[i].len;
      if (v < variable.size() && variable[v] == i) {
        len = (mask >> v) & 1u ? 1 : 2;
        ++v;
      }
      s.append(len, runs[i].c);
    }
    return s;
  };

  const size_t k = variable.size();
  const uint64_t all = k >= 63 ? ~uint64_t{0} : (uint64_t{1} << k) - 1;
  out.insert(render(all));
  out.insert(render(0));
  for (uint64_t mask = 1; mask < all && out.size() < kMaxElongationCandidates; ++mask) out.insert(render(mask));
  return out;
}

// Shortest candidate (ties broken lexicographically).
inline std::string shortest_elongation_form(std::string_view word) {
  auto c = normalize_elongation(word);
  std::string best(word);
  for (const auto& s : c)
    if (s.size() < best.size() || (s.size() == best.size() && s < best)) best = s;
  return best;
}

}  // namespace pepper
