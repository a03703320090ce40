#include "mm3/search.hpp"

#include <chrono>
#include <condition_variable>
#include <deque>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <variant>
#include <vector>

#include "mm3/flip.hpp"
#include "mm3/forms.hpp"

namespace mm3 {

using Clock = std::chrono::steady_clock;

void SearchConfig::validate() const {
    if (!(plus_prob >= 0.0 && plus_prob <= 1.0)) throw std::invalid_argument("plus_prob must be in [0, 1]");
    if (!(escape_prob >= 0.0 && escape_prob <= 1.0)) throw std::invalid_argument("escape_prob must be in [0, 1]");
    if (target_rank < 1) throw std::invalid_argument("target_rank must be positive");
    if (target_rank > max_rank) throw std::invalid_argument("target_rank must not exceed max_rank");
    if (max_rank > kMaxRank) throw std::invalid_argument("max_rank must not exceed 64");
    if (workers < 1) throw std::invalid_argument("workers must be positive");
    if (max_seconds && !(*max_seconds >= 0.0)) throw std::invalid_argument("max_seconds must be non-negative");
}

namespace {

struct Budget {
    std::optional<Clock::time_point> deadline;
    std::optional<std::uint64_t> max_steps;
    const std::atomic<bool>* cancel = nullptr;
    const std::atomic<bool>* stop = nullptr;

    bool exhausted(std::uint64_t steps) const {
        if (max_steps && steps >= *max_steps) return true;
        if (cancel && cancel->load(std::memory_order_relaxed)) return true;
        if (stop && stop->load(std::memory_order_relaxed)) return true;
        return deadline && Clock::now() >= *deadline;
    }
};

class Walker {
public:
    explicit Walker(Rng& rng) : rng_(rng) {}

    // One random flip followed by pruning; false if no flip exists.
    bool random_flip(Scheme& s) {
        enumerate_flips(s, flips_);
        if (flips_.empty()) return false;
        const Flip f = flips_[rng_.below(flips_.size())];
        s = prune_zero(apply_flip(std::move(s), f));
        return true;
    }

    bool plus_move(Scheme& s) {
        auto next = plus(s, rng_);
        if (!next) return false;
        s = std::move(*next);
        return true;
    }

    // Phase 1.
    DescentResult descend(Scheme s, int target, int max_rank, double escape_prob, const Budget& budget,
                          const StepObserver& observer) {
        DescentResult result;
        std::uint64_t steps = 0;
        while (s.rank() != target) {
            if (budget.exhausted(steps)) {
                result.timed_out = true;
                break;
            }
            const bool flipped = random_flip(s);
            if ((!flipped || rng_.chance(escape_prob)) && s.rank() < max_rank) plus_move(s);
            ++steps;
            if (observer) observer(s, steps);
        }
        result.reached = s.rank() == target;
        result.steps = steps;
        result.scheme = std::move(s);
        return result;
    }

    Rng& rng() { return rng_; }

private:
    Rng& rng_;
    std::vector<Flip> flips_;
};

struct WorkerDone {
    int worker_id = 0;
    std::exception_ptr error;
};

using Message = std::variant<SearchRecord, SearchProgress, WorkerDone>;

class Channel {
public:
    void send(Message m) {
        {
            std::lock_guard lock(mutex_);
            queue_.push_back(std::move(m));
        }
        cv_.notify_one();
    }

    std::optional<Message> receive_for(std::chrono::milliseconds timeout) {
        std::unique_lock lock(mutex_);
        if (!cv_.wait_for(lock, timeout, [&] { return !queue_.empty(); })) return std::nullopt;
        Message m = std::move(queue_.front());
        queue_.pop_front();
        return m;
    }

private:
    std::mutex mutex_;
    std::condition_variable cv_;
    std::deque<Message> queue_;
};

void run_worker(int worker_id, const SearchConfig& cfg, const CseStrategy& strategy, Channel& channel,
                const Budget& budget, Clock::time_point start) {
    Rng rng(cfg.seed ^ static_cast<std::uint64_t>(worker_id));
    Walker walker(rng);
    Scheme s = naive_scheme();
    std::optional<int> best;

    Budget descent_budget = budget;
    descent_budget.max_steps.reset();

    for (std::uint64_t iter = 0;; ++iter) {
        if (cfg.max_iterations && iter >= *cfg.max_iterations) break;
        if (budget.exhausted(0)) break;

        DescentResult d =
            walker.descend(std::move(s), cfg.target_rank, cfg.max_rank, cfg.escape_prob, descent_budget, {});
        s = std::move(d.scheme);
        if (!d.reached) break;

        Program program = strategy.reduce(forms_of(s));
        const int adds = count_operations(program).adds_total;
        if (!best || adds < *best) {
            best = adds;
            const double elapsed = std::chrono::duration<double>(Clock::now() - start).count();
            channel.send(SearchRecord{s, std::move(program), adds, s.rank(), worker_id, iter, elapsed});
        }

        if (!walker.random_flip(s) && s.rank() < cfg.max_rank) walker.plus_move(s);
        while (s.rank() < cfg.max_rank && rng.chance(cfg.plus_prob)) walker.plus_move(s);

        if (cfg.report_every && (iter + 1) % cfg.report_every == 0)
            channel.send(SearchProgress{worker_id, iter + 1, s.rank(), best});
    }
}

} // namespace

DescentResult descend_to_rank(Scheme s, const SearchConfig& cfg, Rng& rng, const std::atomic<bool>* cancel,
                              const StepObserver& observer) {
    cfg.validate();
    Budget budget;
    budget.max_steps = cfg.max_iterations;
    budget.cancel = cancel;
    if (cfg.max_seconds)
        budget.deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                             std::chrono::duration<double>(*cfg.max_seconds));
    Walker walker(rng);
    return walker.descend(std::move(s), cfg.target_rank, cfg.max_rank, cfg.escape_prob, budget, observer);
}

SearchSummary search_loop(const SearchConfig& cfg, const CseStrategy& strategy, SearchSink& sink,
                          const std::atomic<bool>* cancel) {
    cfg.validate();
    const Clock::time_point start = Clock::now();
    std::atomic<bool> stop{false};
    Budget budget;
    budget.cancel = cancel;
    budget.stop = &stop;
    if (cfg.max_seconds)
        budget.deadline = start + std::chrono::duration_cast<Clock::duration>(
                                      std::chrono::duration<double>(*cfg.max_seconds));

    Channel channel;
    std::vector<std::jthread> threads;
    threads.reserve(cfg.workers);
    for (int w = 0; w < cfg.workers; ++w) {
        threads.emplace_back([&, w] {
            WorkerDone done{w, nullptr};
            try {
                run_worker(w, cfg, strategy, channel, budget, start);
            } catch (...) {
                done.error = std::current_exception();
            }
            channel.send(done);
        });
    }

    SearchSummary summary;
    std::exception_ptr error;
    int running = cfg.workers;
    while (running > 0) {
        auto msg = channel.receive_for(std::chrono::milliseconds(50));
        if (!msg) continue;
        if (auto* rec = std::get_if<SearchRecord>(&*msg)) {
            ++summary.records;
            const bool global = !summary.best || rec->additions < summary.best->additions;
            if (global) summary.best = *rec;
            sink.on_record(*rec, global);
        } else if (auto* note = std::get_if<SearchProgress>(&*msg)) {
            sink.on_progress(*note);
        } else if (auto* done = std::get_if<WorkerDone>(&*msg)) {
            --running;
            if (done->error && !error) {
                error = done->error;
                stop = true;
            }
        }
    }
    threads.clear();
    if (error) std::rethrow_exception(error);
    summary.cancelled = cancel && cancel->load();
    summary.timed_out = budget.deadline && Clock::now() >= *budget.deadline;
    return summary;
}

} // namespace mm3
