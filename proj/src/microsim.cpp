/*
 * SPDX-License-Identifier: Apache-2.0
 */
#include "sisa/microsim.hpp"

#include <random>
#include <sstream>

#include "sisa/error.hpp"
#include "sisa/perfmodel.hpp"

namespace sisa::micro {

Matrix reference_matmul(const Matrix& a, const Matrix& b) {
  if (a.cols != b.rows) throw PreconditionError("reference_matmul: inner dimensions differ");
  Matrix c(a.rows, b.cols);
  for (std::int64_t i = 0; i < a.rows; ++i)
    for (std::int64_t j = 0; j < b.cols; ++j) {
      std::int64_t acc = 0;
      for (std::int64_t p = 0; p < a.cols; ++p) acc += a.at(i, p) * b.at(p, j);
      c.at(i, j) = acc;
    }
  return c;
}

MicroRun run_microsim(std::int64_t grid_height, std::int64_t grid_width, const Matrix& a,
                      const Matrix& b, const MicroSimOptions& opts) {
  if (grid_height < 1 || grid_width < 1 || grid_height > kMaxGrid || grid_width > kMaxGrid)
    throw PreconditionError("microsim grid must be between 1x1 and 64x64");
  if (a.cols != b.rows || a.rows < 1 || b.cols < 1 || a.cols < 1)
    throw PreconditionError("microsim: A is r x k and B is k x c with r, c, k >= 1");
  if (a.rows > grid_height || b.cols > grid_width)
    throw PreconditionError("microsim: tile larger than the grid");

  MicroRun run;
  run.grid_height = grid_height;
  run.grid_width = grid_width;
  run.r = a.rows;
  run.c = b.cols;
  run.k = a.cols;
  run.a = a;
  run.b = b;
  run.result = Matrix(run.r, run.c);

  const auto H = grid_height;
  const auto W = grid_width;
  auto idx = [W](std::int64_t i, std::int64_t j) { return static_cast<std::size_t>(i * W + j); };
  std::vector<PeState> cur(static_cast<std::size_t>(H * W)), next;

  auto tile_done = [&](const std::vector<PeState>& s) {
    for (std::int64_t i = 0; i < run.r; ++i)
      for (std::int64_t j = 0; j < run.c; ++j)
        if (s[idx(i, j)].macs < run.k) return false;
    return true;
  };

  // Compute: operands hop one PE per cycle (activations right, weights down).
  std::int64_t cycle = 0;
  while (!tile_done(cur)) {
    next = cur;
    for (std::int64_t i = 0; i < H; ++i) {
      for (std::int64_t j = 0; j < W; ++j) {
        auto& pe = next[idx(i, j)];
        if (j == 0) {
          const std::int64_t step = cycle - i;
          pe.activation_valid = i < run.r && step >= 0 && step < run.k;
          pe.activation = pe.activation_valid ? a.at(i, step) : 0;
        } else {
          pe.activation_valid = cur[idx(i, j - 1)].activation_valid;
          pe.activation = cur[idx(i, j - 1)].activation;
        }
        if (i == 0) {
          const std::int64_t step = cycle - j;
          pe.weight_valid = j < run.c && step >= 0 && step < run.k;
          pe.weight = pe.weight_valid ? b.at(step, j) : 0;
        } else {
          pe.weight_valid = cur[idx(i - 1, j)].weight_valid;
          pe.weight = cur[idx(i - 1, j)].weight;
        }
        if (pe.activation_valid && pe.weight_valid) {
          pe.accumulator += pe.activation * pe.weight;
          ++pe.macs;
        }
      }
    }
    cur.swap(next);
    ++cycle;
  }
  run.compute_done_cycle = cycle;
  cycle += opts.drain_fault_cycles;

  // Drain: accumulators latch into the output chain, which shifts down one row
  // per cycle; the bottom row emits. The emitting row is known from the shift count.
  for (auto& pe : cur) {
    pe.output = pe.accumulator;
    pe.output_valid = pe.macs > 0;
  }
  std::int64_t remaining = run.r * run.c;
  for (std::int64_t shift = 1; remaining > 0; ++shift) {
    ++cycle;
    const std::int64_t source_row = H - shift;
    for (std::int64_t j = 0; j < W; ++j) {
      const auto& out = cur[idx(H - 1, j)];
      if (out.output_valid) {
        run.result.at(source_row, j) = out.output;
        --remaining;
      }
    }
    for (std::int64_t i = H - 1; i > 0; --i)
      for (std::int64_t j = 0; j < W; ++j) {
        cur[idx(i, j)].output = cur[idx(i - 1, j)].output;
        cur[idx(i, j)].output_valid = cur[idx(i - 1, j)].output_valid;
      }
    for (std::int64_t j = 0; j < W; ++j) cur[idx(0, j)].output_valid = false;
  }
  run.measured_cycles = cycle;
  return run;
}

SweepReport oracle_sweep(const std::vector<std::int64_t>& heights,
                         const std::vector<std::int64_t>& widths,
                         const std::vector<std::int64_t>& ks, std::int64_t trials,
                         std::uint64_t seed, const MicroSimOptions& opts) {
  SweepReport report;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int64_t> value(-128, 128);

  for (auto H : heights)
    for (auto W : widths)
      for (std::int64_t r = 1; r <= H; ++r)
        for (std::int64_t c = 1; c <= W; ++c)
          for (auto k : ks)
            for (std::int64_t trial = 0; trial < trials; ++trial) {
              Matrix a(r, k), b(k, c);
              for (auto& v : a.data) v = value(rng);
              for (auto& v : b.data) v = value(rng);
              const auto run = run_microsim(H, W, a, b, opts);
              ++report.cases;

              const auto expected = compute_cycles(r, c, k) + H;
              std::ostringstream where;
              where << "grid " << H << "x" << W << " tile (" << r << "," << c << "," << k << ")";
              if (run.measured_cycles != expected) {
                where << ": measured " << run.measured_cycles << " cycles, model predicts "
                      << expected;
                report.counterexample = where.str();
                return report;
              }
              if (run.result != reference_matmul(a, b)) {
                where << ": result differs from the reference matmul";
                report.counterexample = where.str();
                return report;
              }
            }
  report.vacuous = report.cases == 0;
  return report;
}

}  // namespace sisa::micro
