#include <doctest.h>

#include <map>
#include <stdexcept>

#include "mm3/builtin.hpp"
#include "mm3/search.hpp"
#include "support.hpp"

using namespace mm3;
using namespace mm3::test;

namespace {

struct Collect : SearchSink {
    std::vector<SearchRecord> records;
    std::vector<bool> global;
    std::vector<SearchProgress> notes;
    std::atomic<bool>* cancel_after_first = nullptr;

    void on_record(const SearchRecord& r, bool g) override {
        records.push_back(r);
        global.push_back(g);
        if (cancel_after_first) cancel_after_first->store(true);
    }
    void on_progress(const SearchProgress& p) override { notes.push_back(p); }
};

SearchConfig quick(std::uint64_t seed) {
    SearchConfig cfg;
    cfg.target_rank = 25;
    cfg.max_rank = 26;
    cfg.seed = seed;
    cfg.max_iterations = 30;
    return cfg;
}

} // namespace

TEST_CASE("config validation") {
    SearchConfig ok;
    CHECK_NOTHROW(ok.validate());
    auto bad = [](auto edit) {
        SearchConfig c;
        edit(c);
        return c;
    };
    CHECK_THROWS_AS(bad([](SearchConfig& c) { c.plus_prob = 1.5; }).validate(), std::invalid_argument);
    CHECK_THROWS_AS(bad([](SearchConfig& c) { c.escape_prob = -0.1; }).validate(), std::invalid_argument);
    CHECK_THROWS_AS(bad([](SearchConfig& c) { c.target_rank = 26; }).validate(), std::invalid_argument);
    CHECK_THROWS_AS(bad([](SearchConfig& c) { c.max_rank = 65; }).validate(), std::invalid_argument);
    CHECK_THROWS_AS(bad([](SearchConfig& c) { c.workers = 0; }).validate(), std::invalid_argument);
    CHECK_THROWS_AS(bad([](SearchConfig& c) { c.max_seconds = -1.0; }).validate(), std::invalid_argument);
}

TEST_CASE("descent at the target returns its input") {
    SearchConfig cfg;
    Rng rng(1);
    DescentResult d = descend_to_rank(paper58_scheme(), cfg, rng);
    CHECK(d.reached);
    CHECK_FALSE(d.timed_out);
    CHECK(d.steps == 0);
    CHECK(d.scheme == paper58_scheme());
}

TEST_CASE("descent keeps every state valid") {
    SearchConfig cfg;
    cfg.target_rank = 24;
    cfg.max_seconds = 120.0;
    Rng rng(2);
    std::uint64_t observed = 0;
    DescentResult d = descend_to_rank(naive_scheme(), cfg, rng, nullptr, [&](const Scheme& s, std::uint64_t step) {
        if (step % 97 != 0) return;
        REQUIRE(brent_verify(s).valid);
        REQUIRE(all_ternary(s));
        REQUIRE(s.is_well_formed());
        REQUIRE(s.rank() <= 27);
        ++observed;
    });
    CHECK(d.reached);
    CHECK(d.scheme.rank() == 24);
    CHECK(brent_verify(d.scheme).valid);
    CHECK(observed > 0);
}

TEST_CASE("descent honors its budgets") {
    SearchConfig cfg;
    cfg.max_iterations = 10;
    Rng rng(3);
    DescentResult d = descend_to_rank(naive_scheme(), cfg, rng);
    CHECK(d.timed_out);
    CHECK_FALSE(d.reached);
    CHECK(d.steps == 10);
    CHECK(brent_verify(d.scheme).valid);

    std::atomic<bool> cancel{true};
    SearchConfig open;
    DescentResult c = descend_to_rank(naive_scheme(), open, rng, &cancel);
    CHECK(c.timed_out);
    CHECK(c.steps == 0);

    SearchConfig timed;
    timed.max_seconds = 0.0;
    CHECK(descend_to_rank(naive_scheme(), timed, rng).timed_out);
}

TEST_CASE("descent with a fixed seed is reproducible") {
    SearchConfig cfg;
    cfg.target_rank = 25;
    Rng a(9), b(9);
    CHECK(descend_to_rank(naive_scheme(), cfg, a).scheme == descend_to_rank(naive_scheme(), cfg, b).scheme);
}

TEST_CASE("search records are valid and reproducible") {
    Collect first, second;
    GreedyIntersections g;
    SearchSummary s1 = search_loop(quick(5), g, first);
    SearchSummary s2 = search_loop(quick(5), g, second);
    REQUIRE_FALSE(first.records.empty());
    REQUIRE(first.records.size() == second.records.size());
    CHECK(s1.records == first.records.size());
    REQUIRE(s1.best);
    CHECK(s1.best->additions == s2.best->additions);
    for (std::size_t i = 0; i < first.records.size(); ++i) {
        const SearchRecord &a = first.records[i], &b = second.records[i];
        CHECK(a.scheme == b.scheme);
        CHECK(a.program == b.program);
        CHECK(a.additions == b.additions);
        CHECK(a.iteration == b.iteration);
        CHECK(brent_verify(a.scheme).valid);
        CHECK(all_ternary(a.scheme));
        CHECK(a.rank == 25);
        CHECK(a.scheme.rank() == 25);
        CHECK(a.additions == count_operations(a.program).adds_total);
        CHECK(canonicalize(scheme_of(a.program)) == canonicalize(a.scheme));
        if (i > 0) CHECK(a.additions < first.records[i - 1].additions);
    }
}

TEST_CASE("progress notes follow report_every") {
    SearchConfig cfg = quick(6);
    cfg.report_every = 10;
    Collect sink;
    GreedyIntersections g;
    search_loop(cfg, g, sink);
    REQUIRE(sink.notes.size() == 3);
    CHECK(sink.notes[0].iteration == 10);
    CHECK(sink.notes[2].iteration == 30);
    for (const auto& n : sink.notes) CHECK(n.rank <= cfg.max_rank);
}

TEST_CASE("per-worker bests strictly decrease; global best is the minimum") {
    SearchConfig cfg;
    cfg.target_rank = 24;
    cfg.workers = 2;
    cfg.seed = 1;
    cfg.max_seconds = 30.0;
    Collect sink;
    GreedyIntersections g;
    SearchSummary s = search_loop(cfg, g, sink);
    CHECK(s.timed_out);
    REQUIRE_FALSE(sink.records.empty());
    std::map<int, int> last;
    int global = 1 << 30;
    for (std::size_t i = 0; i < sink.records.size(); ++i) {
        const SearchRecord& r = sink.records[i];
        if (last.count(r.worker_id)) CHECK(r.additions < last[r.worker_id]);
        last[r.worker_id] = r.additions;
        CHECK(sink.global[i] == (r.additions < global));
        global = std::min(global, r.additions);
        CHECK(r.rank == 24);
        CHECK(brent_verify(r.scheme).valid);
    }
    CHECK(s.best->additions == global);
    MESSAGE("best rank-24 additions after 30 s with 2 workers: " << global);
}

TEST_CASE("external cancel stops the search") {
    SearchConfig cfg = quick(8);
    cfg.max_iterations.reset();
    cfg.workers = 3;
    std::atomic<bool> cancel{false};
    Collect sink;
    sink.cancel_after_first = &cancel;
    GreedyIntersections g;
    SearchSummary s = search_loop(cfg, g, sink, &cancel);
    CHECK(s.cancelled);
    CHECK_FALSE(sink.records.empty());
}

TEST_CASE("workers use distinct streams") {
    SearchConfig cfg = quick(11);
    cfg.workers = 2;
    cfg.max_iterations = 5;
    Collect sink;
    GreedyIntersections g;
    search_loop(cfg, g, sink);
    std::map<int, Scheme> firsts;
    for (const SearchRecord& r : sink.records)
        if (!firsts.count(r.worker_id)) firsts[r.worker_id] = r.scheme;
    REQUIRE(firsts.size() == 2);
    CHECK_FALSE(firsts[0] == firsts[1]);
}
