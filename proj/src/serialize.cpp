// SPDX-License-Identifier: Apache-2.0
#include "primcalc/serialize.hpp"

namespace primcalc {

using nlohmann::json;

namespace {

json evidence_json(const Evidence& e) {
    return {{"hyp", e.hypothesis}, {"level", std::string(to_string(e.level))}, {"holds", e.holds}, {"detail", e.detail}};
}

json evidence_list(const std::vector<Evidence>& ev) {
    json out = json::array();
    for (const auto& e : ev) out.push_back(evidence_json(e));
    return out;
}

}  // namespace

json to_json(const DomainSet& d) {
    json parts = json::array();
    for (const Interval& c : d.parts())
        parts.push_back({{"lo", c.lo.to_string()},
                         {"hi", c.hi.to_string()},
                         {"lo_closed", c.lo_closed},
                         {"hi_closed", c.hi_closed}});
    return {{"parts", parts}, {"window", json::array({d.window().lo.to_string(), d.window().hi.to_string()})}};
}

json to_json(const PrimitiveFamily& fam) {
    const Fn& F = fam.base();
    json plugs = json::array();
    for (const Plug& p : F.plugs()) plugs.push_back(json::array({p.point.to_string(), p.value.to_string()}));
    json comps = json::array();
    for (const Interval& c : fam.components()) comps.push_back(c.to_string());
    json constants = json::array();
    if (fam.arity() == 1) {
        constants.push_back("c");
    } else {
        for (std::size_t i = 1; i <= fam.arity(); ++i) constants.push_back("c" + std::to_string(i));
    }
    json base;
    if (F.is_uniform()) {
        base = format_expr(F.rule());
    } else {
        base = json::array();
        for (const Expr& r : F.rules()) base.push_back(format_expr(r));
    }
    return {{"base", base}, {"plugs", plugs}, {"components", comps}, {"constants", constants}};
}

json to_json(const RuleTrace& trace) {
    json steps = json::array();
    for (const TraceStep& s : trace.steps)
        steps.push_back(
            {{"rule", s.rule}, {"theorem", s.theorem}, {"evidence", evidence_list(s.evidence)}, {"result", s.result}});
    return {{"steps", steps}};
}

json to_json(const CheckReport& report) {
    json j = {{"verdict", std::string(to_string(report.verdict))},
              {"reason", std::string(to_string(report.reason))},
              {"message", report.message},
              {"evidence", evidence_list(report.evidence)}};
    if (report.witness) j["witness"] = report.witness->to_string();
    if (report.witness2) j["witness2"] = report.witness2->to_string();
    return j;
}

}  // namespace primcalc
