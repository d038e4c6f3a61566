#ifndef HCSP_SYSJSON_HPP
#define HCSP_SYSJSON_HPP

#include <string>

#include "hcsp/process.hpp"

namespace hcsp {

// JSON interchange for systems. Field names mirror the in-memory types;
// process bodies are carried as canonical concrete syntax:
//   {
//     "modules": { "M": { "params": [...], "outputs": [...],
//                         "procedures": { "P": "<text>" }, "body": "<text>" } },
//     "instances": [ { "id": "m", "module": "M", "args": [0, "t1"] } ],
//     "universe": { "ch": [[0, "t1"], [0, "t2"]] }
//   }
std::string system_to_json(const System& sys);
System system_from_json(const std::string& text);

}  // namespace hcsp

#endif
