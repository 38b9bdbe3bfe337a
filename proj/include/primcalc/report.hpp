// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "primcalc/exact.hpp"

namespace primcalc {

/// How a hypothesis was established.
///   symbolic: structurally guaranteed (AST identity, grammar closure).
///   numeric:  sampling / sign-chart based; may false-accept below the scan
///             resolution.
///   assumed:  not checked; only produced when the caller opts in.
enum class EvidenceLevel { Symbolic, Numeric, Assumed };

std::string_view to_string(EvidenceLevel level);

struct Evidence {
    std::string hypothesis;
    EvidenceLevel level = EvidenceLevel::Symbolic;
    bool holds = true;
    std::string detail;
};

enum class Verdict { Pass, Fail };

enum class Reason {
    None,
    DomainMismatch,
    DerivativeMismatch,
    NotDifferentiable,
    HypothesisUnverified,
    NonConstantDifference,
    InverseUnverified,
};

std::string_view to_string(Verdict v);
std::string_view to_string(Reason r);

/// Verdict of a verification or hypothesis check.
///
/// A failing report always names a reason. For DomainMismatch the witness is
/// a point that belongs to exactly one of the two compared domains.
struct CheckReport {
    Verdict verdict = Verdict::Pass;
    Reason reason = Reason::None;
    std::vector<Evidence> evidence;
    std::optional<Real> witness;
    /// Second witness for NonConstantDifference (the pair of points).
    std::optional<Real> witness2;
    std::string message;

    bool passed() const { return verdict == Verdict::Pass; }

    void add(Evidence e) { evidence.push_back(std::move(e)); }
    void fail(Reason r, std::string msg) {
        verdict = Verdict::Fail;
        reason = r;
        message = std::move(msg);
    }
    /// First evidence entry that does not hold, if any.
    const Evidence* failed_evidence() const;
};

/// One theorem or rule application inside a derivation.
struct TraceStep {
    std::string rule;
    std::string theorem;
    std::vector<Evidence> evidence;
    std::string result;
};

struct RuleTrace {
    std::vector<TraceStep> steps;

    void append(const RuleTrace& other) {
        steps.insert(steps.end(), other.steps.begin(), other.steps.end());
    }
    /// Number of evidence entries at the given level across all steps.
    std::size_t count(EvidenceLevel level) const;
    bool contains_rule(std::string_view rule) const;
};

}  // namespace primcalc
