/*
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sisa::micro {

/// Dense row-major integer matrix.
struct Matrix {
  std::int64_t rows = 0;
  std::int64_t cols = 0;
  std::vector<std::int64_t> data;

  Matrix() = default;
  Matrix(std::int64_t r, std::int64_t c) : rows(r), cols(c), data(static_cast<std::size_t>(r * c), 0) {}

  std::int64_t& at(std::int64_t i, std::int64_t j) { return data[static_cast<std::size_t>(i * cols + j)]; }
  std::int64_t at(std::int64_t i, std::int64_t j) const {
    return data[static_cast<std::size_t>(i * cols + j)];
  }
  friend bool operator==(const Matrix&, const Matrix&) = default;
};

Matrix reference_matmul(const Matrix& a, const Matrix& b);

/// One processing element of the output-stationary grid.
struct PeState {
  std::int64_t activation = 0;
  bool activation_valid = false;
  std::int64_t weight = 0;
  bool weight_valid = false;
  std::int64_t accumulator = 0;
  std::int64_t macs = 0;
  std::int64_t output = 0;
  bool output_valid = false;
};

struct MicroRun {
  std::int64_t grid_height = 0;
  std::int64_t grid_width = 0;
  std::int64_t r = 0;
  std::int64_t c = 0;
  std::int64_t k = 0;
  Matrix a;
  Matrix b;
  std::int64_t measured_cycles = 0;
  std::int64_t compute_done_cycle = 0;  // cycles until the last MAC retired
  Matrix result;
};

/// Fault injection for mutation checks of the oracle itself.
struct MicroSimOptions {
  std::int64_t drain_fault_cycles = 0;  // idle cycles inserted before the drain starts
};

inline constexpr std::int64_t kMaxGrid = 64;

/// Steps a grid_height x grid_width PE grid cycle by cycle: A rows enter from
/// the left skewed by row, B columns from the top skewed by column, each PE
/// MACs when both operands are present, then outputs shift down one row per
/// cycle until they leave the bottom row. Throws PreconditionError on bad dims.
MicroRun run_microsim(std::int64_t grid_height, std::int64_t grid_width, const Matrix& a,
                      const Matrix& b, const MicroSimOptions& opts = {});

struct SweepReport {
  std::int64_t cases = 0;
  bool vacuous = false;
  std::optional<std::string> counterexample;

  bool passed() const { return !counterexample.has_value(); }
};

/// Runs every grid in heights x widths against every tile r <= H, c <= W and
/// every k in `ks`, with `trials` random operand draws per case (values in
/// [-128, 128]). Checks cycles == (k + r + c - 2) + H and C == A x B exactly.
SweepReport oracle_sweep(const std::vector<std::int64_t>& heights,
                         const std::vector<std::int64_t>& widths,
                         const std::vector<std::int64_t>& ks, std::int64_t trials = 1,
                         std::uint64_t seed = 0x5157u, const MicroSimOptions& opts = {});

}  // namespace sisa::micro
