// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "primcalc/report.hpp"

namespace primcalc {

enum class ErrorCode {
    Syntax,
    UnknownIdentifier,
    Overflow,
    InvalidArgument,
    WindowMismatch,
    EmptyDomain,
    ResolutionFailure,
    UndefinedNear,
    DomainViolation,
    ToleranceNotMet,
    NotAPrimitive,
    ArityMismatch,
    ZeroScale,
    HypothesisUnverified,
    InverseUnverified,
    RuleNotFound,
    CrossCheckMismatch,
    CatalogBroken,
};

std::string_view to_string(ErrorCode code);

/// Library error. Carries the failing report for verdict-like errors
/// (NotAPrimitive, HypothesisUnverified) and the partial derivation for
/// RuleNotFound.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Error(ErrorCode code, const std::string& what, CheckReport report)
        : std::runtime_error(what), code_(code),
          report_(std::make_shared<const CheckReport>(std::move(report))) {}
    Error(ErrorCode code, const std::string& what, RuleTrace trace)
        : std::runtime_error(what), code_(code),
          trace_(std::make_shared<const RuleTrace>(std::move(trace))) {}

    ErrorCode code() const { return code_; }
    const CheckReport* report() const { return report_.get(); }
    const RuleTrace* trace() const { return trace_.get(); }

private:
    ErrorCode code_;
    std::shared_ptr<const CheckReport> report_;
    std::shared_ptr<const RuleTrace> trace_;
};

/// Syntax error at a byte offset, with the set of tokens that would have been
/// accepted there.
class ParseError : public Error {
public:
    ParseError(ErrorCode code, std::size_t offset, std::vector<std::string> expected,
               const std::string& what)
        : Error(code, what), offset_(offset), expected_(std::move(expected)) {}

    std::size_t offset() const { return offset_; }
    const std::vector<std::string>& expected() const { return expected_; }

private:
    std::size_t offset_;
    std::vector<std::string> expected_;
};

}  // namespace primcalc
