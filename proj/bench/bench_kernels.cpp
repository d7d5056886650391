// Benchmarks the OpenMP kernels against their serial reference
// implementations: polynomial multiplication, the DP value iteration, and a
// bridge grid audit. Results are bit-identical by construction (exact
// arithmetic); this target reports wall-clock speedups.

#include <chrono>
#include <cstdio>
#include <functional>

#include "cww/bridge.hpp"
#include "cww/dpgrid.hpp"
#include "cww/multipoly.hpp"
#include "cww/parallel.hpp"

using namespace cww;

namespace {

double time_of(const std::function<void()>& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

MultiPoly dense_poly(unsigned deg) {
    const std::vector<std::string> R{"x", "y", "z"};
    MultiPoly p(R);
    std::uint64_t s = 12345;
    for (std::uint32_t i = 0; i <= deg; ++i)
        for (std::uint32_t j = 0; j + i <= deg; ++j)
            for (std::uint32_t k = 0; k + i + j <= deg; ++k) {
                s = s * 6364136223846793005ULL + 1442695040888963407ULL;
                const long c = static_cast<long>((s >> 33) % 2001) - 1000;
                if (c != 0) p = p + MultiPoly::monomial(R, {i, j, k}, Rational(c));
            }
    return p;
}

} // namespace

int main() {
    std::printf("threads available: %d\n", thread_count());

    {
        const MultiPoly a = dense_poly(12), b = dense_poly(12);
        std::printf("poly mul: %zu x %zu terms\n", a.term_count(), b.term_count());
        MultiPoly r_serial, r_parallel;
        const double ts = time_of([&] { r_serial = MultiPoly::mul_serial(a, b); });
        const double tp = time_of([&] { r_parallel = MultiPoly::mul_parallel(a, b); });
        std::printf("  serial   %.3f s\n  parallel %.3f s  (x%.2f, identical: %s)\n", ts, tp,
                    ts / tp, r_serial == r_parallel ? "yes" : "NO");
    }

    {
        DpGrid base;
        base.depth = 8;
        base.xs = dp_xgrid(96, Rational(9, 10), 32, Rational(4));
        base.taus = dp_taugrid(256);
        DpGrid g1, g2;
        const double ts = time_of([&] { g1 = dp_oracle_serial(base); });
        const double tp = time_of([&] { g2 = dp_oracle(base); });
        std::printf("dp oracle (depth 8, 128 x, 256 tau):\n");
        std::printf("  serial   %.3f s\n  parallel %.3f s  (x%.2f, identical: %s)\n", ts, tp,
                    ts / tp, g1.table == g2.table ? "yes" : "NO");
    }

    {
        std::printf("bridge midpoint audit on D7:\n");
        BridgeCache c1, c2;
        set_parallel_enabled(false);
        const double ts = time_of([&] { audit_midpoint_inequality(7, Precision{128}, c1); });
        set_parallel_enabled(true);
        const double tp = time_of([&] { audit_midpoint_inequality(7, Precision{128}, c2); });
        std::printf("  serial   %.3f s\n  parallel %.3f s\n", ts, tp);
    }
    return 0;
}
