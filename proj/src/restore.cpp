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

#include "fdlab/restore.hpp"

#include <algorithm>
#include <cassert>

namespace fdlab {

std::string_view to_string(RestoreKind kind) {
  switch (kind) {
    case RestoreKind::Trail:
      return "trail";
    case RestoreKind::Copy:
      return "copy";
    case RestoreKind::CopyRecompute:
      return "copy-recompute";
  }
  return "?";
}

RestoreKind parse_restore_kind(std::string_view text) {
  if (text == "trail") return RestoreKind::Trail;
  if (text == "copy") return RestoreKind::Copy;
  if (text == "copy-recompute") return RestoreKind::CopyRecompute;
  throw ModelError("unknown restore mode '" + std::string(text) + "'");
}

std::string describe(const RestoreMode& mode) {
  std::string out(to_string(mode.kind));
  if (mode.kind == RestoreKind::CopyRecompute) {
    out += "(d=" + std::to_string(mode.distance) + ",a=" + std::to_string(mode.adaptive_distance) + ")";
  }
  return out;
}

void RestoreBackend::record(const VariableStore&, VarId, Region, std::uint32_t, std::uint32_t) {}

NodeFrame& RestoreBackend::push_frame(const Decision& decision) {
  NodeFrame& f = frames_.emplace_back();
  f.depth = frames_.size() - 1;
  f.decision = decision;
  f.path_pos = path_.size();
  path_.push_back(decision);
  return f;
}

void RestoreBackend::pop_to(std::size_t target_depth) {
  assert(target_depth < frames_.size());
  path_.resize(frames_[target_depth].path_pos);
  frames_.resize(target_depth);
}

namespace {

class TrailBackend final : public RestoreBackend {
 public:
  RestoreKind kind() const override { return RestoreKind::Trail; }

  void record(const VariableStore& store, VarId var, Region region, std::uint32_t offset,
              std::uint32_t count) override {
    const auto words = store.region(region).subspan(offset, count);
    entries_.push_back({var, region, offset, count, saved_.size()});
    saved_.insert(saved_.end(), words.begin(), words.end());
    ++stats_.trail_entries;
  }

  void open_node(VariableStore&, const Decision& decision) override {
    push_frame(decision).trail_mark = entries_.size();
  }

  bool backtrack_to(VariableStore& store, std::size_t target_depth, Replayer&) override {
    const std::size_t mark = frames_[target_depth].trail_mark;
    while (entries_.size() > mark) {
      const Entry& e = entries_.back();
      auto dst = store.mutable_region(e.region).subspan(e.offset, e.count);
      std::copy_n(saved_.begin() + static_cast<std::ptrdiff_t>(e.saved_begin), e.count, dst.begin());
      saved_.resize(e.saved_begin);
      entries_.pop_back();
    }
    pop_to(target_depth);
    return true;
  }

 private:
  struct Entry {
    VarId var;
    Region region;
    std::uint32_t offset;
    std::uint32_t count;
    std::size_t saved_begin;
  };

  std::vector<Entry> entries_;
  std::vector<std::uint64_t> saved_;
};

// Reusable snapshot buffers.
class SnapshotPool {
 public:
  std::size_t take(const VariableStore& store) {
    std::size_t slot;
    if (free_.empty()) {
      slot = slots_.size();
      slots_.emplace_back();
    } else {
      slot = free_.back();
      free_.pop_back();
    }
    store.save(slots_[slot]);
    return slot;
  }
  void load(VariableStore& store, std::size_t slot) const { store.load(slots_[slot]); }
  void release(std::size_t slot) { free_.push_back(slot); }

 private:
  std::vector<std::vector<std::uint64_t>> slots_;
  std::vector<std::size_t> free_;
};

class CopyingBackend final : public RestoreBackend {
 public:
  explicit CopyingBackend(const RestoreMode& mode)
      : kind_(mode.kind),
        distance_(mode.kind == RestoreKind::Copy ? 1 : std::max<std::uint32_t>(mode.distance, 1)),
        adaptive_(mode.kind == RestoreKind::Copy ? 0 : mode.adaptive_distance) {}

  RestoreKind kind() const override { return kind_; }

  void open_node(VariableStore& store, const Decision& decision) override {
    const std::size_t depth = frames_.size();
    NodeFrame& f = push_frame(decision);
    if (depth % distance_ == 0) f.snapshot = snapshot(store);
  }

  bool backtrack_to(VariableStore& store, std::size_t target_depth, Replayer& replayer) override {
    std::size_t source = target_depth;
    while (!frames_[source].snapshot) {
      assert(source > 0);
      --source;
    }
    pool_.load(store, *frames_[source].snapshot);

    bool ok = true;
    const std::size_t begin = frames_[source].path_pos;
    const std::size_t end = frames_[target_depth].path_pos;
    if (end > begin) {
      ++stats_.recomputations;
      stats_.replayed_decisions += end - begin;
      std::optional<std::size_t> mid;
      if (adaptive_ > 0 && end - begin >= adaptive_ && target_depth - source >= 2)
        mid = source + (target_depth - source) / 2;
      ok = replayer.begin_replay();
      for (std::size_t pos = begin; ok && pos < end; ++pos) {
        if (mid && pos == frames_[*mid].path_pos) frames_[*mid].snapshot = snapshot(store);
        ok = replayer.replay(path_[pos]);
      }
    }

    for (std::size_t d = target_depth; d < frames_.size(); ++d)
      if (frames_[d].snapshot) pool_.release(*frames_[d].snapshot);
    pop_to(target_depth);
    return ok;
  }

 private:
  std::size_t snapshot(const VariableStore& store) {
    ++stats_.snapshots_taken;
    stats_.bytes_copied += store.byte_size();
    return pool_.take(store);
  }

  RestoreKind kind_;
  std::uint32_t distance_;
  std::uint32_t adaptive_;
  SnapshotPool pool_;
};

}  // namespace

std::unique_ptr<RestoreBackend> make_backend(const RestoreMode& mode) {
  if (mode.kind == RestoreKind::Trail) return std::make_unique<TrailBackend>();
  if (mode.kind == RestoreKind::CopyRecompute && mode.distance == 0)
    throw ModelError("recomputation distance must be positive");
  return std::make_unique<CopyingBackend>(mode);
}

}  // namespace fdlab
