#include "cww/lineartest.hpp"

#include <algorithm>
#include <sstream>

namespace cww {

namespace {

struct TestContext {
    const std::vector<std::string>* order = nullptr;
    std::vector<TestReport::PathEntry> trail;
    TestReport report;
};

// Returns false on the first negative partial sum (canonical elimination
// order, so the witness is deterministic).
bool run_level(const MultiPoly& p, std::size_t active, TestContext& ctx) {
    if (active == 0) {
        const Rational c = p.constant_term();
        if (c.sign() < 0) {
            ctx.report.verdict = TestReport::Verdict::Fail;
            ctx.report.failure_path = ctx.trail;
            ctx.report.failure_value = c;
            return false;
        }
        return true;
    }
    const std::string& v = (*ctx.order)[active - 1];
    const long n = p.degree_in(v);
    MultiPoly q = p;
    for (long k = 0; k <= std::max(n, 0L); ++k) {
        const MultiPoly s = q.subst_zero(v);
        ctx.trail.push_back({v, static_cast<unsigned>(k)});
        const bool ok = run_level(s, active - 1, ctx);
        if (!ok) return false;
        ctx.trail.pop_back();
        q = s + (q - s).divide_by_var(v);
    }
    return true;
}

} // namespace

TestReport linear_test(const MultiPoly& p, const std::vector<std::string>& var_order) {
    for (const auto& v : p.vars()) {
        if (p.degree_in(v) > 0 &&
            std::find(var_order.begin(), var_order.end(), v) == var_order.end())
            throw DomainError("linear_test: variable '" + v + "' missing from var_order");
    }
    TestContext ctx;
    ctx.order = &var_order;
    run_level(p, var_order.size(), ctx);
    return ctx.report;
}

TestReport linear_test(const MultiPoly& p) { return linear_test(p, p.vars()); }

std::string TestReport::to_string() const {
    if (passed()) return "Pass";
    std::ostringstream os;
    os << "Fail at ";
    for (const auto& e : failure_path) os << e.var << ":" << e.step << " ";
    os << "(partial sum " << failure_value.to_string() << ")";
    return os.str();
}

} // namespace cww
