// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <json.hpp>

#include "primcalc/domain.hpp"
#include "primcalc/primitives.hpp"
#include "primcalc/report.hpp"
#include "primcalc/rules.hpp"

namespace primcalc {

/// {"parts":[{"lo":"0","hi":"3*pi/2","lo_closed":false,"hi_closed":false}],"window":["-8*pi","8*pi"]}
nlohmann::json to_json(const DomainSet& d);

/// {"base":"...","plugs":[["pi","0"]],"components":["]0,pi["],"constants":["c1","c2"]}
nlohmann::json to_json(const PrimitiveFamily& fam);

/// {"steps":[{"rule":"by_parts","theorem":"IBP","evidence":[{"hyp":"...","level":"symbolic"}],"result":"..."}]}
/// Evidence entries also carry "holds" and "detail".
nlohmann::json to_json(const RuleTrace& trace);

/// {"verdict":"fail","reason":"DomainMismatch","witness":"pi","message":"...","evidence":[...]}
nlohmann::json to_json(const CheckReport& report);

}  // namespace primcalc
