#pragma once

#include <string>

#include "json.hpp"
#include "levels/chfset.hpp"
#include "levels/hfset.hpp"
#include "levels/logic/structure.hpp"
#include "levels/models.hpp"

// JSON forms. Pure sets are nested arrays. A complemented set is the array
// of its children when low and {"co": [...]} when high. Structures name
// elements by label, so labels must be unique:
//   {"kind":"epsilon","elements":[...],"mem":{a:[x,...]},"below":{b:[x,...]}}
//   {"kind":"stage","sets":[...],"stages":[...],"mem":{..},"before":{t:[s,...]},
//    "at":{s:[x,...]},"low":[...],"high":[...]}
//   {"kind":"kripke","worlds":[...],"acc":[[w,v],...],"elements":[...],
//    "domains":{w:[x,...]},"mem":{w:{a:[x,...]}}}
// In "acc", [w, v] means w precedes v. Keys of "mem" maps with no members
// may be omitted.
namespace levels::io {

using nlohmann::json;

json to_json(HFSet a);
HFSet hf_from_json(const json& j);
json to_json(CHFSet a);
CHFSet chf_from_json(const json& j);

json to_json(const logic::Structure& s);
// Validates the result; throws DomainError on malformed or unknown input.
logic::Structure structure_from_json(const json& j);

// Deterministic: verdicts in suite order, witnesses as labelled text, no
// timings.
json to_json(const models::CheckReport& r);

}  // namespace levels::io
