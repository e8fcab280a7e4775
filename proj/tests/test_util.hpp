// Copyright 2026 The Flotilla Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Shared helpers for the test programs.

#ifndef FLOTILLA_TESTS_TEST_UTIL_HPP_
#define FLOTILLA_TESTS_TEST_UTIL_HPP_

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "flotilla/lattice.hpp"

namespace flotilla::testing {

// Grows a random edge-connected polyomino of `n` cells inside a
// width x height box, retrying until it spans at least two columns.
inline std::vector<GridCell> RandomCells(std::mt19937_64& rng, int n, int width,
                                         int height) {
  for (;;) {
    std::set<GridCell> cells;
    std::uniform_int_distribution<int> col(0, width - 1), row(0, height - 1);
    cells.insert({col(rng), row(rng)});
    int guard = 0;
    while (static_cast<int>(cells.size()) < n && guard++ < 10000) {
      auto it = cells.begin();
      std::advance(it, std::uniform_int_distribution<std::size_t>(
                           0, cells.size() - 1)(rng));
      const GridCell c = *it;
      const GridCell next[] = {{c.col + 1, c.row}, {c.col - 1, c.row},
                               {c.col, c.row + 1}, {c.col, c.row - 1}};
      const GridCell pick = next[std::uniform_int_distribution<int>(0, 3)(rng)];
      if (pick.col < 0 || pick.col >= width || pick.row < 0 ||
          pick.row >= height) {
        continue;
      }
      cells.insert(pick);
    }
    std::set<int> cols;
    for (const auto& c : cells) cols.insert(c.col);
    if (static_cast<int>(cells.size()) == n && cols.size() >= 2) {
      return {cells.begin(), cells.end()};
    }
  }
}

inline std::vector<GridCell> Row(int n) {
  std::vector<GridCell> cells;
  for (int i = 0; i < n; ++i) cells.push_back({i, 0});
  return cells;
}

}  // namespace flotilla::testing

#endif  // FLOTILLA_TESTS_TEST_UTIL_HPP_
