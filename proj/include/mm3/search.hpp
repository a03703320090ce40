#pragma once

// Flip-graph search for low-addition schemes.
//
// Each worker repeats three phases starting from the naive rank-27 scheme:
//   1. uniformly random flips until the scheme has target_rank, with a
//      plus move when stuck or with escape_prob while the rank is below
//      max_rank;
//   2. subexpression elimination, reporting any improvement of the
//      worker's best addition count;
//   3. one random flip, then plus moves with plus_prob while the rank is
//      below max_rank.

#include <atomic>
#include <cstdint>
#include <functional>
#include <optional>

#include "mm3/cse.hpp"
#include "mm3/program.hpp"
#include "mm3/rng.hpp"
#include "mm3/tensor.hpp"

namespace mm3 {

struct SearchConfig {
    int target_rank = 23;
    int max_rank = 25;
    double plus_prob = 0.05;
    double escape_prob = 0.05;
    std::uint64_t seed = 0;
    int workers = 1;
    std::optional<double> max_seconds;
    // In descend_to_rank: walk steps. In search_loop: outer iterations per
    // worker (each iteration runs all three phases).
    std::optional<std::uint64_t> max_iterations;
    // Progress note every this many outer iterations; 0 disables.
    std::uint64_t report_every = 0;

    // Throws std::invalid_argument.
    void validate() const;
};

struct SearchRecord {
    Scheme scheme;
    Program program;
    int additions = 0;
    int rank = 0;
    int worker_id = 0;
    std::uint64_t iteration = 0;
    double wall_time = 0.0; // seconds since the search started
};

struct SearchProgress {
    int worker_id = 0;
    std::uint64_t iteration = 0;
    int rank = 0;
    std::optional<int> best_adds;
};

// Callbacks run on the coordinating thread only.
class SearchSink {
public:
    virtual ~SearchSink() = default;
    virtual void on_record(const SearchRecord& record, bool global_best) = 0;
    virtual void on_progress(const SearchProgress&) {}
};

struct DescentResult {
    Scheme scheme;
    bool reached = false;
    bool timed_out = false;
    std::uint64_t steps = 0;
};

using StepObserver = std::function<void(const Scheme&, std::uint64_t step)>;

// Phase 1 on its own. Stops early (timed_out = true, carrying the last
// valid state) on max_seconds, max_iterations steps, or *cancel.
DescentResult descend_to_rank(Scheme s, const SearchConfig& cfg, Rng& rng,
                              const std::atomic<bool>* cancel = nullptr, const StepObserver& observer = {});

struct SearchSummary {
    std::optional<SearchRecord> best;
    std::uint64_t records = 0;
    bool cancelled = false;
    bool timed_out = false;
};

// Runs cfg.workers independent walks; worker i uses Rng(cfg.seed ^ i).
// Workers only send records and progress notes to the caller's thread,
// which keeps the global best and drives the sink. Returns when every
// worker hit max_iterations, or on max_seconds / *cancel.
SearchSummary search_loop(const SearchConfig& cfg, const CseStrategy& strategy, SearchSink& sink,
                          const std::atomic<bool>* cancel = nullptr);

} // namespace mm3
