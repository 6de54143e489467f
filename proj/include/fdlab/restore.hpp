// Copyright 2026 The fdlab Authors
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
//
// Backtrack memory. A backend keeps one NodeFrame per open choice point and
// knows how to bring the store back to the state it had when that frame was
// opened:
//
//   Trail          undo saved words in reverse order down to the frame's mark
//   Copy           load the frame's snapshot of the whole store
//   CopyRecompute  snapshot every `distance` levels; otherwise load the
//                  nearest older snapshot and replay the decisions taken since

#ifndef FDLAB_RESTORE_HPP_
#define FDLAB_RESTORE_HPP_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fdlab/domain.hpp"

namespace fdlab {

// x = value when `equal`, x != value otherwise.
struct Decision {
  VarId var;
  std::int64_t value = 0;
  bool equal = true;

  Decision negated() const { return {var, value, !equal}; }
  Action action() const { return equal ? Action::assign(value) : Action::remove(value); }
  friend bool operator==(const Decision&, const Decision&) = default;
};

enum class RestoreKind : std::uint8_t { Trail, Copy, CopyRecompute };

struct RestoreMode {
  RestoreKind kind = RestoreKind::Trail;
  std::uint32_t distance = 8;
  std::uint32_t adaptive_distance = 2;

  static RestoreMode trail() { return {RestoreKind::Trail, 1, 2}; }
  static RestoreMode copy() { return {RestoreKind::Copy, 1, 2}; }
  static RestoreMode recompute(std::uint32_t distance, std::uint32_t adaptive = 2) {
    return {RestoreKind::CopyRecompute, distance, adaptive};
  }
};

std::string_view to_string(RestoreKind kind);
RestoreKind parse_restore_kind(std::string_view text);
std::string describe(const RestoreMode& mode);

struct RestoreStats {
  std::uint64_t bytes_copied = 0;
  std::uint64_t trail_entries = 0;
  std::uint64_t snapshots_taken = 0;
  std::uint64_t recomputations = 0;
  std::uint64_t replayed_decisions = 0;

  friend bool operator==(const RestoreStats&, const RestoreStats&) = default;
};

struct NodeFrame {
  std::size_t depth = 0;
  Decision decision;
  std::size_t trail_mark = 0;
  std::optional<std::size_t> snapshot;  // slot in the backend's snapshot pool
  std::size_t path_pos = 0;             // decisions applied before this frame
};

// Re-applies a decision with full propagation during recomputation.
class Replayer {
 public:
  virtual ~Replayer() = default;
  // Called once after a snapshot has been loaded, before any decision.
  virtual bool begin_replay() { return true; }
  virtual bool replay(const Decision& decision) = 0;
};

class RestoreBackend : public StoreObserver {
 public:
  ~RestoreBackend() override = default;

  virtual RestoreKind kind() const = 0;

  // Opens a choice point at depth() for the current store; the left
  // decision is applied by the caller afterwards.
  virtual void open_node(VariableStore& store, const Decision& decision) = 0;

  // Restores the store to the frame at `target_depth` and pops it together
  // with every deeper frame. Returns false only when replayed propagation
  // fails, which can happen only if constraints were tightened since the
  // frame was opened (branch and bound).
  virtual bool backtrack_to(VariableStore& store, std::size_t target_depth, Replayer& replayer) = 0;

  // Records a decision applied without opening a frame (the right branch).
  void commit(const Decision& decision) { path_.push_back(decision); }

  void record(const VariableStore& store, VarId var, Region region, std::uint32_t offset,
              std::uint32_t count) override;

  std::size_t depth() const { return frames_.size(); }
  const std::vector<NodeFrame>& frames() const { return frames_; }
  const std::vector<Decision>& path() const { return path_; }
  const RestoreStats& stats() const { return stats_; }

 protected:
  NodeFrame& push_frame(const Decision& decision);
  void pop_to(std::size_t target_depth);

  std::vector<NodeFrame> frames_;
  std::vector<Decision> path_;
  RestoreStats stats_;
};

std::unique_ptr<RestoreBackend> make_backend(const RestoreMode& mode);

}  // namespace fdlab

#endif  // FDLAB_RESTORE_HPP_
