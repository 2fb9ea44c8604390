#pragma once

#include <cstdint>
#include <string>

#include "ncvr/oracle.hpp"
#include "ncvr/optimizers/run_record.hpp"

namespace ncvr::detail {

// Shared checkpointing and divergence guard for the optimizer loops.
class Recorder {
 public:
  Recorder(Oracle& oracle, RunRecord& record, const RunOptions& options);

  // Records a checkpoint at x (skipped when disabled or when no IFO call
  // happened since the previous one). Returns false on divergence.
  bool checkpoint(const Vector& x, std::uint64_t update_index);

  // Returns false and marks the record diverged when x is unusable.
  bool accept(const Vector& x, std::uint64_t update_index);

  void notify(std::uint64_t update_index, std::uint64_t epoch, std::size_t step,
              const Vector& x) const;

  // True when the update-count cadence asks for a checkpoint now.
  bool due(std::uint64_t update_index, std::uint64_t natural_period) const;

  void finish();

  void mark_diverged(std::uint64_t update_index, const std::string& why);

 private:

  Oracle& oracle_;
  RunRecord& record_;
  const RunOptions& options_;
};

}  // namespace ncvr::detail
