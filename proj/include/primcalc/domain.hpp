// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "primcalc/exact.hpp"
#include "primcalc/expr.hpp"
#include "primcalc/tolerances.hpp"

namespace primcalc {

/// Open working window (lo, hi). Domains are only authoritative inside it.
struct Window {
    Real lo = Real::pi_multiple(Rational(-8));
    Real hi = Real::pi_multiple(Rational(8));

    double length() const { return hi.value() - lo.value(); }
    std::string to_string() const;
    friend bool operator==(const Window& a, const Window& b) {
        return equal(a.lo, b.lo) && equal(a.hi, b.hi);
    }
};

/// Checked window constructor: finite endpoints with lo < hi.
Window make_window(const Real& lo, const Real& hi);

struct Interval {
    Real lo;
    Real hi;
    bool lo_closed = false;
    bool hi_closed = false;

    /// Throws InvalidArgument unless lo < hi and infinite endpoints are open.
    static Interval make(Real lo, Real hi, bool lo_closed, bool hi_closed);

    bool contains(double x) const;
    bool contains(const Real& x) const;
    double length() const { return hi.value() - lo.value(); }
    /// "]0,3*pi/2[" style.
    std::string to_string() const;
};

/// Finite union of disjoint intervals inside a window, sorted and canonical:
/// parts whose closures meet are merged unless the meeting point is excluded
/// from both.
class DomainSet {
public:
    explicit DomainSet(Window w = {}) : window_(std::move(w)) {}

    /// Normalizing constructor: sorts, merges, drops degenerate parts and clips
    /// to the window.
    static DomainSet from_parts(std::vector<Interval> parts, Window w);
    /// Keeps the parts exactly as given, for validating external input with
    /// is_standard.
    static DomainSet from_parts_raw(std::vector<Interval> parts, Window w);
    /// The whole open window.
    static DomainSet full(Window w);

    const std::vector<Interval>& parts() const { return parts_; }
    const Window& window() const { return window_; }
    bool empty() const { return parts_.empty(); }
    bool contains(double x) const;
    bool contains(const Real& x) const;
    /// Index of the part containing x, if any.
    std::optional<std::size_t> component_of(double x) const;

    /// "]a,b[ ∪ [c,d]"; the empty set prints as "∅".
    std::string to_string() const;

private:
    std::vector<Interval> parts_;
    Window window_;
};

/// Largest subset of the window on which eval_at(e, .) is defined. Throws
/// EmptyDomain, ResolutionFailure, InvalidArgument.
DomainSet natural_domain(const Expr& e, const Window& window = {}, const Tolerances& tol = {});

/// Throws WindowMismatch, or EmptyDomain when nothing of positive length is
/// left.
DomainSet intersect(const DomainSet& a, const DomainSet& b);
/// Same, but returns an empty set instead of throwing EmptyDomain.
DomainSet intersect_or_empty(const DomainSet& a, const DomainSet& b);
DomainSet unite(const DomainSet& a, const DomainSet& b);
/// d with finitely many points removed.
DomainSet remove_points(const DomainSet& d, const std::vector<Real>& points);

std::vector<Interval> components(const DomainSet& d);

struct StandardViolation {
    std::size_t part;
    std::string clause;
    std::string detail;
};

struct StandardCheck {
    bool standard = true;
    std::vector<StandardViolation> violations;
};

/// Validates the representation invariants. Clauses: "positive_length",
/// "infinite_endpoint_open", "disjoint", "separated", "within_window".
StandardCheck is_standard(const DomainSet& d);

struct DomainComparison {
    bool equal = true;
    /// A point in exactly one of the two sets.
    std::optional<Real> witness;
    std::string detail;
};

DomainComparison domains_equal(const DomainSet& a, const DomainSet& b);

/// A point of a outside b (and not among extra_points), if any.
std::optional<Real> subset_witness(const DomainSet& a, const DomainSet& b,
                                   const std::vector<Real>& extra_points = {});
inline bool is_subset(const DomainSet& a, const DomainSet& b) { return !subset_witness(a, b); }

/// Midpoint, exact when both ends are exact of the same kind.
Real midpoint(const Real& a, const Real& b);

/// Parses a window or endpoint token: an exact constant expression such as
/// "4pi", "-8*pi", "3*pi/2", "2.5" or "-inf". Throws Syntax/InvalidArgument.
Real parse_real(std::string_view text);

}  // namespace primcalc
