#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <vector>

namespace fraclab {

/// Worker cap for pair reductions. Defaults to the hardware count.
unsigned thread_count();
void set_thread_count(unsigned threads);

/// Rows per reduction block. Fixed so that block boundaries, and therefore
/// floating-point results, do not depend on the number of threads.
inline constexpr std::size_t kRowsPerBlock = 16;

/// Run `task(block)` for every block index in [0, blocks) on up to
/// thread_count() workers. Tasks must only write to their own slot.
void run_blocks(std::size_t blocks, const std::function<void(std::size_t)>& task);

/// Deterministic row-blocked reduction. Rows [0, rows) are cut into
/// contiguous blocks of kRowsPerBlock; each block folds its rows in order
/// into a fresh accumulator, and block results are merged in block order.
template <class Acc, class RowFn, class MergeFn>
Acc reduce_rows(std::size_t rows, Acc init, RowFn&& row, MergeFn&& merge) {
  const std::size_t blocks = (rows + kRowsPerBlock - 1) / kRowsPerBlock;
  std::vector<Acc> partial(blocks, init);
  run_blocks(blocks, [&](std::size_t b) {
    const std::size_t end = std::min(rows, (b + 1) * kRowsPerBlock);
    for (std::size_t i = b * kRowsPerBlock; i < end; ++i) row(i, partial[b]);
  });
  Acc total = std::move(init);
  for (Acc& p : partial) merge(total, p);
  return total;
}

}  // namespace fraclab
