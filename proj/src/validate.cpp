#include "mm3/validate.hpp"

#include <stdexcept>

#include "mm3/rng.hpp"

namespace mm3 {

namespace {

template <typename Eval>
NumericReport run_trials(const Eval& eval, const NumericOptions& opt) {
    if (opt.trials == 0) throw std::invalid_argument("numeric validation needs at least one trial");
    if (opt.lo > opt.hi) throw std::invalid_argument("numeric validation needs lo <= hi");
    Rng rng(opt.seed);
    NumericReport report;
    report.trials = opt.trials;
    for (std::uint64_t t = 0; t < opt.trials; ++t) {
        Matrix3 a, b;
        for (auto& x : a) x = rng.between(opt.lo, opt.hi);
        for (auto& x : b) x = rng.between(opt.lo, opt.hi);
        Matrix3 expected = multiply_naive(a, b);
        Matrix3 got = eval(a, b);
        if (got == expected) {
            ++report.passed;
        } else {
            ++report.failures;
            if (!report.first_failure) report.first_failure = Counterexample{t, a, b, expected, got};
        }
    }
    return report;
}

} // namespace

NumericReport numeric_validate(const Scheme& s, const NumericOptions& opt) {
    return run_trials([&](const Matrix3& a, const Matrix3& b) { return evaluate(s, a, b); }, opt);
}

NumericReport numeric_validate(const Program& p, const NumericOptions& opt) {
    ProgramEvaluator eval(p);
    return run_trials(eval, opt);
}

BrentReport symbolic_validate(const Program& p) { return brent_verify(scheme_of(p)); }

} // namespace mm3
