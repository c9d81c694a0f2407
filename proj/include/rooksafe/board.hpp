// Copyright 2026 The rooksafe Authors
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

#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rooksafe/exact.hpp"

namespace rooksafe {

/// Row-major cell index, row * n + col.
using Cell = std::uint64_t;

/// n rooks on n distinct cells of an n x n board, stored sorted.
class Board {
 public:
  static Board from_cells(std::uint64_t n, std::vector<Cell> cells) {
    detail::require_board_side(n, "Board");
    if (cells.size() != n) {
      throw std::invalid_argument("Board: expected " + std::to_string(n) + " rooks, got " +
                                  std::to_string(cells.size()));
    }
    std::sort(cells.begin(), cells.end());
    if (std::adjacent_find(cells.begin(), cells.end()) != cells.end()) {
      throw std::invalid_argument("Board: duplicate cell");
    }
    if (!cells.empty() && cells.back() >= n * n) {
      throw std::invalid_argument("Board: cell index out of range");
    }
    return Board(n, std::move(cells));
  }

  /// Zero-based (row, col) coordinates.
  static Board from_squares(std::uint64_t n,
                            std::span<const std::pair<std::uint64_t, std::uint64_t>> squares) {
    std::vector<Cell> cells;
    cells.reserve(squares.size());
    for (const auto& [row, col] : squares) {
      if (row >= n || col >= n) {
        throw std::invalid_argument("Board: square outside the board");
      }
      cells.push_back(row * n + col);
    }
    return from_cells(n, std::move(cells));
  }

  std::uint64_t n() const { return n_; }
  std::span<const Cell> cells() const { return cells_; }

  friend bool operator==(const Board&, const Board&) = default;
  friend auto operator<=>(const Board&, const Board&) = default;

 private:
  Board(std::uint64_t n, std::vector<Cell> cells) : n_(n), cells_(std::move(cells)) {}

  std::uint64_t n_;
  std::vector<Cell> cells_;
};

struct OccupancyProfile {
  std::uint64_t occupied_rows = 0;
  std::uint64_t occupied_cols = 0;
  std::uint64_t safe_count = 0;

  friend bool operator==(const OccupancyProfile&, const OccupancyProfile&) = default;
};

/// Row/column occupancy for repeated use on one board size. Scratch flags are
/// cleared after each call, so the cost is O(rooks) rather than O(n).
class OccupancyCounter {
 public:
  explicit OccupancyCounter(std::uint64_t n) : n_(n), row_seen_(n, 0), col_seen_(n, 0) {}

  OccupancyProfile operator()(std::span<const Cell> cells) {
    OccupancyProfile p;
    for (const Cell cell : cells) {
      const std::uint64_t row = cell / n_;
      const std::uint64_t col = cell % n_;
      p.occupied_rows += row_seen_[row] ^ 1U;
      row_seen_[row] = 1;
      p.occupied_cols += col_seen_[col] ^ 1U;
      col_seen_[col] = 1;
    }
    for (const Cell cell : cells) {
      row_seen_[cell / n_] = 0;
      col_seen_[cell % n_] = 0;
    }
    // A square is safe iff its row and its column are both rook-free.
    p.safe_count = (n_ - p.occupied_rows) * (n_ - p.occupied_cols);
    return p;
  }

 private:
  std::uint64_t n_;
  std::vector<std::uint8_t> row_seen_;
  std::vector<std::uint8_t> col_seen_;
};

inline OccupancyProfile safe_count(const Board& board) {
  OccupancyCounter counter(board.n());
  return counter(board.cells());
}

}  // namespace rooksafe
