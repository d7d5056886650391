#pragma once

#include <string>
#include <vector>

#include "cww/bridge.hpp"
#include "cww/interval.hpp"
#include "cww/multipoly.hpp"

namespace cww {

// One verified step of a proof pipeline.
struct CertStep {
    std::string kind;  // identity | zero_remainder | linear_test | rational_compare
    std::string desc;
    bool ok = false;
};

// Deterministic machine-checkable transcript of one pipeline run. Success
// iff every step verified; a failure records the step index and a witness.
struct Certificate {
    std::string pipeline;
    bool success = false;
    std::vector<CertStep> steps;
    long ms = 0;
    int failed_step = -1;
    std::string witness;

    // {"pipeline": ..., "status": ..., "steps": [...], "ms": ...}; pass
    // include_ms = false for golden-file comparison.
    std::string to_json(bool include_ms = true) const;
};

struct PipelineOptions {
    // Deliberately break the final polynomial before its non-negativity test
    // (sets its constant term to -1, so the very first partial sum fails).
    // Negative-control harness only.
    bool perturb_final = false;
};

// Optional capture of named intermediate polynomials ("P1", "P2", ...) as
// they are built, so tests can pin individual published coefficients.
struct PipelineCapture {
    std::map<std::string, MultiPoly> polys;
};

// M[M[y,x],M[z,x]] >= M[M[y,z],x]
Certificate prove_mean_assoc(const PipelineOptions& opt = {}, PipelineCapture* capture = nullptr);
// M[M[x,y],M[z,w]] <= max{M[x,w],M[y,z]}
Certificate prove_merge_max(const PipelineOptions& opt = {}, PipelineCapture* capture = nullptr);
// the x_-/xtilde_- tail ratio inequality
Certificate prove_tail_ratio(const PipelineOptions& opt = {}, PipelineCapture* capture = nullptr);
// M[z,y] <= M[(z+M[z,y])/2, M[M[z,y],y]]
Certificate prove_midpoint_step(const PipelineOptions& opt = {}, PipelineCapture* capture = nullptr);

// The exact numeric chain for M[1/(2 sqrt5), M[1/sqrt5, 1]] > 1/sqrt5, in
// Q(sqrt5)/Q(sqrt119) arithmetic, cross-certified by interval arithmetic.
Certificate prove_level5();

// 3^k >= 2k+1 for k = 0..K plus the symbolic induction step 3(2k+1)-(2k+3) = 4k.
Certificate prove_phi_coeffs(unsigned long K);

// The polynomial identity chain behind the Bellman inequality for 1/(1+x^2).
Certificate prove_tilde_b_supersolution();

// xF' + F'' = 4(8x^2-3x^4-1)/(1+3x^2)^3 for F = (1+x^2)/(1+3x^2), plus the
// boundary decomposition and endpoint values.
Certificate prove_case3_boundary();

// Interval audit of the three reduction inequalities on A-values over D_n.
Certificate audit_reduction_instances(unsigned n, Precision p, const BridgeCache& cache);

// Valid ids: 4.3, 4.4, 4.5, 4.6, level5, phi, tilde-b, case3, reductions.
std::vector<std::string> pipeline_ids();

struct RunOptions {
    Precision precision{kDefaultPrecisionBits};
    unsigned cap_bits = kDefaultPrecisionCap;
    unsigned long phi_terms = 10000;
    unsigned reductions_level = 6;
};
// DomainError on an unknown id.
Certificate run_pipeline(const std::string& id, const RunOptions& opt = {});

} // namespace cww
