// SPDX-License-Identifier: Apache-2.0
#include "primcalc/report.hpp"

#include <algorithm>

#include "primcalc/error.hpp"

namespace primcalc {

std::string_view to_string(EvidenceLevel level) {
    switch (level) {
        case EvidenceLevel::Symbolic: return "symbolic";
        case EvidenceLevel::Numeric: return "numeric";
        case EvidenceLevel::Assumed: return "assumed";
    }
    return "unknown";
}

std::string_view to_string(Verdict v) { return v == Verdict::Pass ? "pass" : "fail"; }

std::string_view to_string(Reason r) {
    switch (r) {
        case Reason::None: return "none";
        case Reason::DomainMismatch: return "DomainMismatch";
        case Reason::DerivativeMismatch: return "DerivativeMismatch";
        case Reason::NotDifferentiable: return "NotDifferentiable";
        case Reason::HypothesisUnverified: return "HypothesisUnverified";
        case Reason::NonConstantDifference: return "NonConstantDifference";
        case Reason::InverseUnverified: return "InverseUnverified";
    }
    return "unknown";
}

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::Syntax: return "SyntaxError";
        case ErrorCode::UnknownIdentifier: return "UnknownIdentifier";
        case ErrorCode::Overflow: return "Overflow";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::WindowMismatch: return "WindowMismatch";
        case ErrorCode::EmptyDomain: return "EmptyDomain";
        case ErrorCode::ResolutionFailure: return "ResolutionFailure";
        case ErrorCode::UndefinedNear: return "UndefinedNear";
        case ErrorCode::DomainViolation: return "DomainViolation";
        case ErrorCode::ToleranceNotMet: return "ToleranceNotMet";
        case ErrorCode::NotAPrimitive: return "NotAPrimitive";
        case ErrorCode::ArityMismatch: return "ArityMismatch";
        case ErrorCode::ZeroScale: return "ZeroScale";
        case ErrorCode::HypothesisUnverified: return "HypothesisUnverified";
        case ErrorCode::InverseUnverified: return "InverseUnverified";
        case ErrorCode::RuleNotFound: return "RuleNotFound";
        case ErrorCode::CrossCheckMismatch: return "CrossCheckMismatch";
        case ErrorCode::CatalogBroken: return "CatalogBroken";
    }
    return "Unknown";
}

const Evidence* CheckReport::failed_evidence() const {
    auto it = std::find_if(evidence.begin(), evidence.end(), [](const Evidence& e) { return !e.holds; });
    return it == evidence.end() ? nullptr : &*it;
}

std::size_t RuleTrace::count(EvidenceLevel level) const {
    std::size_t n = 0;
    for (const auto& s : steps)
        n += static_cast<std::size_t>(
            std::count_if(s.evidence.begin(), s.evidence.end(), [level](const Evidence& e) { return e.level == level; }));
    return n;
}

bool RuleTrace::contains_rule(std::string_view rule) const {
    return std::any_of(steps.begin(), steps.end(), [rule](const TraceStep& s) { return s.rule == rule; });
}

}  // namespace primcalc
