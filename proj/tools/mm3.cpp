// mm3: search, verify, reduce and emit 3x3 matrix multiplication schemes.

#include <atomic>
#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <iterator>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mm3/builtin.hpp"
#include "mm3/codegen.hpp"
#include "mm3/cse.hpp"
#include "mm3/forms.hpp"
#include "mm3/io.hpp"
#include "mm3/search.hpp"
#include "mm3/validate.hpp"

namespace fs = std::filesystem;
using namespace mm3;

namespace {

enum Exit { kOk = 0, kInvalid = 1, kUsage = 2, kNoRecord = 3 };

// Thrown for bad input files or arguments; maps to exit 2.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::atomic<bool> g_interrupted{false};

extern "C" void on_interrupt(int) { g_interrupted.store(true); }

std::string slurp_stdin() {
    return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
}

// A path, "-" for stdin, or the name of a built-in.
AnyFile load(const std::string& arg) {
    if (arg == "-") return parse_any(slurp_stdin());
    std::error_code ec;
    if (fs::exists(arg, ec)) return parse_any(read_text(arg));
    for (std::string_view name : builtin_names()) {
        if (name != arg) continue;
        Builtin b = builtin(name);
        if (auto* s = std::get_if<Scheme>(&b)) return SchemeFile{*s, {}};
        return ProgramFile{std::get<Program>(b), {}};
    }
    throw InputError("cannot read \"" + arg + "\": no such file or built-in");
}

void emit(const std::string& path, const std::string& text) {
    if (path == "-")
        std::cout << text << std::flush;
    else
        write_atomic(path, text);
}

std::string counts_line(const Program& p) {
    const OpCount c = count_operations(p);
    return "muls=" + std::to_string(c.muls) + " adds=" + std::to_string(c.adds) + " subs=" +
           std::to_string(c.subs) + " total_adds=" + std::to_string(c.adds_total);
}

void print_violation(const BrentReport& r) {
    const BrentViolation& v = r.violations.front();
    const auto& x = v.index;
    std::cout << "brent=invalid violations=" << r.violations.size() << " first=(" << x[0] << "," << x[1] << ","
              << x[2] << "," << x[3] << "," << x[4] << "," << x[5] << ") residual=" << v.residual << "\n";
}

void print_numeric(const NumericReport& r) {
    std::cout << "numeric=" << (r.ok() ? "ok" : "invalid") << " passed=" << r.passed << "/" << r.trials << "\n";
    if (!r.first_failure) return;
    const Counterexample& f = *r.first_failure;
    std::cout << "first numeric failure at trial " << f.trial << ":";
    for (int e = 0; e < kEntries; ++e)
        if (f.got[e] != f.expected[e])
            std::cout << " " << to_string(output_ref(e)) << "=" << f.got[e] << " (expected " << f.expected[e] << ")";
    std::cout << "\n";
}

struct VerifyArgs {
    std::string path;
    NumericOptions numeric;
};

int cmd_verify(const VerifyArgs& args) {
    AnyFile file = load(args.path);
    bool valid = true;
    if (auto* sf = std::get_if<SchemeFile>(&file)) {
        const Scheme& s = sf->scheme;
        std::cout << "rank=" << s.rank() << " naive_adds=" << naive_addition_count(s).total << "\n";
        BrentReport brent = brent_verify(s);
        if (brent.valid)
            std::cout << "brent=ok\n";
        else
            print_violation(brent);
        NumericReport numeric = numeric_validate(s, args.numeric);
        print_numeric(numeric);
        valid = brent.valid && numeric.ok();
    } else {
        const Program& p = std::get<ProgramFile>(file).program;
        std::cout << counts_line(p) << "\n";
        try {
            BrentReport brent = symbolic_validate(p);
            if (brent.valid)
                std::cout << "brent=ok\n";
            else
                print_violation(brent);
            valid = brent.valid;
        } catch (const NonTernaryExpansion& e) {
            std::cout << "brent=invalid " << e.what() << "\n";
            valid = false;
        }
        NumericReport numeric = numeric_validate(p, args.numeric);
        print_numeric(numeric);
        valid = valid && numeric.ok();
    }
    return valid ? kOk : kInvalid;
}

int cmd_reduce(const std::string& path, const std::string& out) {
    AnyFile file = load(path);
    auto* sf = std::get_if<SchemeFile>(&file);
    if (!sf) throw InputError("reduce expects a scheme file; programs are already reduced");
    sf->scheme.check_well_formed();
    GreedyIntersections strategy;
    Program p = strategy.reduce(forms_of(sf->scheme));
    emit(out, serialize_program(p, {{"source", "reduce"}, {"strategy", std::string(strategy.name())}}));
    (out == "-" ? std::cerr : std::cout) << counts_line(p) << "\n";
    return kOk;
}

Program as_program(const AnyFile& file) {
    if (auto* sf = std::get_if<SchemeFile>(&file)) return program_from_forms(forms_of(sf->scheme));
    return std::get<ProgramFile>(file).program;
}

int cmd_show(const std::string& path, const std::string& format) {
    AnyFile file = load(path);
    if (format == "json") {
        if (auto* sf = std::get_if<SchemeFile>(&file))
            std::cout << serialize_scheme(sf->scheme, sf->metadata);
        else
            std::cout << serialize_program(std::get<ProgramFile>(file).program, std::get<ProgramFile>(file).metadata);
    } else {
        std::cout << render_algebraic(as_program(file));
    }
    return kOk;
}

int cmd_codegen(const std::string& path, const std::string& dialect, const std::string& name) {
    const Dialect d = parse_dialect(dialect);
    std::cout << emit_code(as_program(load(path)), d, name);
    return kOk;
}

int cmd_builtin(const std::string& name) {
    Builtin b = builtin(name);
    const Metadata meta{{"builtin", name}};
    if (auto* s = std::get_if<Scheme>(&b))
        std::cout << serialize_scheme(*s, meta);
    else
        std::cout << serialize_program(std::get<Program>(b), meta);
    return kOk;
}

class FileSink : public SearchSink {
public:
    FileSink(std::optional<std::string> out, std::uint64_t seed) : out_(std::move(out)), seed_(seed) {}

    void on_record(const SearchRecord& rec, bool global_best) override {
        if (!global_best) return;
        std::cerr << "record worker=" << rec.worker_id << " iter=" << rec.iteration << " rank=" << rec.rank
                  << " additions=" << rec.additions << "\n";
        write(rec);
    }

    void on_progress(const SearchProgress& p) override {
        std::cerr << "worker=" << p.worker_id << " iter=" << p.iteration << " rank=" << p.rank << " best_adds="
                  << (p.best_adds ? std::to_string(*p.best_adds) : "-") << "\n";
    }

    void write(const SearchRecord& rec) const {
        if (!out_) return;
        const Metadata meta{{"source", "search"},
                            {"seed", std::to_string(seed_)},
                            {"worker", std::to_string(rec.worker_id)},
                            {"iteration", std::to_string(rec.iteration)},
                            {"rank", std::to_string(rec.rank)},
                            {"additions", std::to_string(rec.additions)}};
        write_atomic(*out_ + ".scheme.json", serialize_scheme(rec.scheme, meta));
        write_atomic(*out_ + ".program.json", serialize_program(rec.program, meta));
    }

private:
    std::optional<std::string> out_;
    std::uint64_t seed_;
};

std::uint64_t default_seed() {
    const char* env = std::getenv("MM3_SEED");
    if (!env || !*env) return 0;
    try {
        std::size_t used = 0;
        const std::uint64_t seed = std::stoull(env, &used);
        if (used == std::string_view(env).size()) return seed;
    } catch (const std::exception&) {
    }
    throw InputError(std::string("MM3_SEED is not an unsigned integer: ") + env);
}

int cmd_search(SearchConfig cfg, std::optional<std::uint64_t> seed, const std::optional<std::string>& out) {
    cfg.seed = seed ? *seed : default_seed();
    cfg.validate();
    std::signal(SIGINT, on_interrupt);
    std::signal(SIGTERM, on_interrupt);
    FileSink sink(out, cfg.seed);
    GreedyIntersections strategy;
    SearchSummary summary = search_loop(cfg, strategy, sink, &g_interrupted);
    if (!summary.best) {
        std::cout << "no scheme of rank " << cfg.target_rank << " found seed=" << cfg.seed << "\n";
        return kNoRecord;
    }
    sink.write(*summary.best);
    std::cout << "rank=" << summary.best->rank << " additions=" << summary.best->additions << " seed=" << cfg.seed
              << "\n";
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Search, verify and emit 3x3 matrix multiplication schemes"};
    app.require_subcommand(1, 1);

    SearchConfig cfg;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    auto* search = app.add_subcommand("search", "Flip-graph search for low-addition schemes");
    search->add_option("--target-rank", cfg.target_rank)->capture_default_str();
    search->add_option("--max-rank", cfg.max_rank)->capture_default_str();
    search->add_option("--plus-prob", cfg.plus_prob)->capture_default_str();
    search->add_option("--escape-prob", cfg.escape_prob)->capture_default_str();
    search->add_option("--seed", seed, "Defaults to $MM3_SEED, else 0");
    search->add_option("--workers", cfg.workers)->capture_default_str();
    search->add_option("--max-seconds", cfg.max_seconds);
    search->add_option("--max-iterations", cfg.max_iterations, "Outer iterations per worker");
    search->add_option("--report-every", cfg.report_every, "Progress line every N iterations (0: off)")
        ->capture_default_str();
    search->add_option("--out", out, "Writes PATH.scheme.json and PATH.program.json");

    VerifyArgs verify_args;
    auto* verify = app.add_subcommand("verify", "Check a scheme or program symbolically and numerically");
    verify->add_option("path", verify_args.path, "File, - for stdin, or built-in name")->required();
    verify->add_option("--numeric-trials", verify_args.numeric.trials)->capture_default_str();
    verify->add_option("--lo", verify_args.numeric.lo)->capture_default_str();
    verify->add_option("--hi", verify_args.numeric.hi)->capture_default_str();
    verify->add_option("--seed", verify_args.numeric.seed)->capture_default_str();

    std::string path, reduce_out = "-";
    auto* reduce = app.add_subcommand("reduce", "Greedy subexpression elimination of a scheme");
    reduce->add_option("path", path)->required();
    reduce->add_option("--out", reduce_out, "Program file, - for stdout")->capture_default_str();

    std::string show_format = "algebraic";
    auto* show = app.add_subcommand("show", "Print a scheme or program");
    show->add_option("path", path)->required();
    show->add_option("--format", show_format)->check(CLI::IsMember({"algebraic", "json"}))->capture_default_str();

    std::string dialect = "pseudo", function_name = "mm3_multiply";
    auto* codegen = app.add_subcommand("codegen", "Emit straight-line code");
    codegen->add_option("path", path)->required();
    codegen->add_option("--dialect", dialect)->check(CLI::IsMember({"pseudo", "c-like"}))->capture_default_str();
    codegen->add_option("--name", function_name, "Function name for c-like output")->capture_default_str();

    std::string builtin_name;
    auto* builtin_cmd = app.add_subcommand("builtin", "Dump a built-in scheme or program");
    builtin_cmd->add_option("name", builtin_name)
        ->required()
        ->check(CLI::IsMember({"naive3", "paper58-scheme", "paper58-program"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*search) return cmd_search(cfg, seed, out);
        if (*verify) return cmd_verify(verify_args);
        if (*reduce) return cmd_reduce(path, reduce_out);
        if (*show) return cmd_show(path, show_format);
        if (*codegen) return cmd_codegen(path, dialect, function_name);
        if (*builtin_cmd) return cmd_builtin(builtin_name);
    } catch (const std::exception& e) {
        std::cerr << "mm3: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
