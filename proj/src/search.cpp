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

#include "fdlab/search.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>
#include <string>

namespace fdlab {

std::string_view to_string(BnBMode mode) {
  return mode == BnBMode::PostConstraint ? "post" : "tighten";
}

BnBMode parse_bnb_mode(std::string_view text) {
  if (text == "post") return BnBMode::PostConstraint;
  if (text == "tighten") return BnBMode::TightenBound;
  throw ModelError("unknown branch-and-bound mode '" + std::string(text) + "'");
}

double nodes_per_second(std::uint64_t nodes, double solve_ms) {
  constexpr double kMinSeconds = 1e-9;
  return static_cast<double>(nodes) / std::max(solve_ms / 1000.0, kMinSeconds);
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

class Search final : public Replayer {
 public:
  Search(Model& model, const SearchOptions& options, std::optional<VarId> objective)
      : model_(model),
        engine_(model.engine),
        store_(model.engine.store()),
        options_(options),
        order_(options.order ? *options.order : model.branch_order),
        objective_(objective),
        backend_(make_backend(options.restore)) {}

  SearchResult run() {
    SearchResult result;
    const auto setup_start = Clock::now();
    engine_.queue().set_policy(options_.queue);
    engine_.seal();
    engine_.schedule_all();
    const bool root_ok = engine_.fixpoint() == FixpointResult::Fixpoint;
    result.stats.setup_ms = model_.build_ms + elapsed_ms(setup_start);
    if (!root_ok) {
      engine_.queue().clear();
      result.root_failed = true;
      return result;
    }

    store_.set_observer(backend_.get());
    const auto solve_start = Clock::now();
    explore(result);
    result.stats.solve_ms = elapsed_ms(solve_start);
    store_.set_observer(nullptr);

    result.stats.nodes = nodes_;
    result.stats.backtracks = backtracks_;
    result.stats.nps = nodes_per_second(nodes_, result.stats.solve_ms);
    result.stats.propagations = engine_.propagations();
    result.stats.restore = backend_->stats();
    return result;
  }

  bool begin_replay() override { return apply_bound() && settle(); }

  bool replay(const Decision& d) override { return apply(d); }

 private:
  void explore(SearchResult& result) {
    std::size_t cursor = 0;
    for (;;) {
      while (cursor < order_.size() && store_.assigned(order_[cursor])) ++cursor;
      if (cursor == order_.size()) {
        if (on_solution(result)) return;
        if (!retreat(cursor)) return;
        continue;
      }
      const VarId var = order_[cursor];
      const Decision left{var, store_.min(var), true};
      cursors_.push_back(cursor);
      backend_->open_node(store_, left);
      ++nodes_;
      if (apply(left)) continue;
      ++backtracks_;
      if (!retreat(cursor)) return;
    }
  }

  // Returns true when search should stop.
  bool on_solution(SearchResult& result) {
    ++result.stats.solutions;
    Solution sol;
    if (options_.keep_solutions || objective_) {
      sol.values.reserve(order_.size());
      for (VarId v : order_) sol.values.push_back(store_.min(v));
    }
    if (objective_) {
      const std::int64_t value = store_.min(*objective_);
      sol.objective = value;
      bound_ = value - 1;
      if (options_.bnb == BnBMode::PostConstraint) {
        const auto id = engine_.add(make_upper_bound(*objective_, *bound_));
        engine_.subscribe(id, *objective_, EventClass::BoundsChanged);
        cut_ = id;
      }
      result.solutions.assign(1, std::move(sol));
      return false;
    }
    if (options_.keep_solutions) result.solutions.push_back(std::move(sol));
    return options_.mode == SolveMode::First;
  }

  // Pops choice points until a right branch survives propagation.
  bool retreat(std::size_t& cursor) {
    while (backend_->depth() > 0) {
      const std::size_t target = backend_->depth() - 1;
      const Decision right = backend_->frames()[target].decision.negated();
      cursor = cursors_[target];
      cursors_.resize(target);
      bool ok = backend_->backtrack_to(store_, target, *this);
      if (!ok && !objective_) throw std::logic_error("recomputation failed without a bound change");
      if (ok && options_.on_backtrack) options_.on_backtrack(store_, target);
      backend_->commit(right);
      ++nodes_;
      ok = ok && apply_bound() && apply(right);
      if (ok) return true;
      engine_.queue().clear();
      ++backtracks_;
    }
    return false;
  }

  bool apply_bound() {
    if (!bound_) return true;
    if (options_.bnb == BnBMode::TightenBound) {
      if (engine_.set_max(*objective_, *bound_)) return true;
      engine_.queue().clear();
      return false;
    }
    engine_.schedule(*cut_);
    return true;
  }

  bool apply(const Decision& d) {
    if (!engine_.narrow(d.var, d.action())) {
      engine_.queue().clear();
      return false;
    }
    return settle();
  }

  bool settle() { return engine_.fixpoint() == FixpointResult::Fixpoint; }

  Model& model_;
  Engine& engine_;
  VariableStore& store_;
  const SearchOptions& options_;
  std::vector<VarId> order_;
  std::optional<VarId> objective_;
  std::unique_ptr<RestoreBackend> backend_;
  std::vector<std::size_t> cursors_;
  std::uint64_t nodes_ = 0;
  std::uint64_t backtracks_ = 0;
  std::optional<std::int64_t> bound_;
  std::optional<std::uint32_t> cut_;
};

}  // namespace

SearchResult solve(Model& model, const SearchOptions& options) {
  return Search(model, options, std::nullopt).run();
}

OptimizeResult minimize(Model& model, const SearchOptions& options, std::optional<VarId> objective) {
  if (!objective) objective = model.objective;
  if (!objective) throw ModelError("minimize needs an objective variable");
  SearchResult r = Search(model, options, objective).run();
  OptimizeResult out;
  out.stats = r.stats;
  if (!r.solutions.empty()) out.best = std::move(r.solutions.back());
  return out;
}

}  // namespace fdlab
