#include "hcsp/sysjson.hpp"

#include "hcsp/errors.hpp"
#include "hcsp/parser.hpp"
#include "hcsp/pretty.hpp"

#include "json.hpp"

namespace hcsp {

namespace {

nlohmann::json value_to_json(const Value& v) {
  if (v.is_real()) return v.as_real();
  if (v.is_bool()) return v.as_bool();
  if (v.is_string()) return v.as_string();
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& x : v.as_list()) arr.push_back(value_to_json(x));
  return arr;
}

Value value_from_json(const nlohmann::json& j) {
  if (j.is_number()) return Value(j.get<double>());
  if (j.is_boolean()) return Value(j.get<bool>());
  if (j.is_string()) return Value(j.get<std::string>());
  if (j.is_array()) {
    Value::List items;
    for (const auto& x : j) items.push_back(value_from_json(x));
    return Value(std::move(items));
  }
  throw Error("schema_error", "unsupported value in system JSON");
}

}  // namespace

std::string system_to_json(const System& sys) {
  nlohmann::json j;
  j["modules"] = nlohmann::json::object();
  for (const auto& [name, m] : sys.modules) {
    nlohmann::json jm;
    jm["params"] = m.params;
    jm["outputs"] = m.outputs;
    jm["procedures"] = nlohmann::json::object();
    for (const auto& [pname, body] : m.procedures)
      jm["procedures"][pname] = pretty_print(body);
    jm["body"] = pretty_print(m.body);
    j["modules"][name] = std::move(jm);
  }
  j["instances"] = nlohmann::json::array();
  for (const auto& inst : sys.instances) {
    nlohmann::json ji;
    ji["id"] = inst.id;
    ji["module"] = inst.module;
    ji["args"] = nlohmann::json::array();
    for (const auto& a : inst.args) ji["args"].push_back(value_to_json(a));
    j["instances"].push_back(std::move(ji));
  }
  if (!sys.universe.empty()) {
    nlohmann::json ju = nlohmann::json::object();
    for (const auto& [name, tuples] : sys.universe) {
      nlohmann::json arr = nlohmann::json::array();
      for (const auto& tuple : tuples) {
        nlohmann::json t = nlohmann::json::array();
        for (const auto& a : tuple) {
          if (const auto* i = std::get_if<std::int64_t>(&a))
            t.push_back(*i);
          else if (const auto* s = std::get_if<std::string>(&a))
            t.push_back(*s);
          else
            throw Error("schema_error", "universe tuples must be concrete");
        }
        arr.push_back(std::move(t));
      }
      ju[name] = std::move(arr);
    }
    j["universe"] = std::move(ju);
  }
  return j.dump(2);
}

System system_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  System sys;
  if (j.contains("modules")) {
    for (auto it = j["modules"].begin(); it != j["modules"].end(); ++it) {
      Module m;
      m.name = it.key();
      const auto& jm = it.value();
      if (jm.contains("params"))
        m.params = jm["params"].get<std::vector<std::string>>();
      if (jm.contains("outputs"))
        m.outputs = jm["outputs"].get<std::vector<std::string>>();
      if (jm.contains("procedures")) {
        for (auto pit = jm["procedures"].begin(); pit != jm["procedures"].end(); ++pit)
          m.procedures[pit.key()] =
              parse_process(pit.value().get<std::string>(), m.name + "." + pit.key());
      }
      m.body = parse_process(jm.at("body").get<std::string>(), m.name + ".body");
      sys.modules[m.name] = std::move(m);
    }
  }
  if (j.contains("instances")) {
    for (const auto& ji : j["instances"]) {
      Instance inst;
      inst.id = ji.at("id").get<std::string>();
      inst.module = ji.at("module").get<std::string>();
      if (ji.contains("args"))
        for (const auto& a : ji["args"]) inst.args.push_back(value_from_json(a));
      sys.instances.push_back(std::move(inst));
    }
  }
  if (j.contains("universe")) {
    for (auto it = j["universe"].begin(); it != j["universe"].end(); ++it) {
      std::vector<std::vector<ChannelArg>> tuples;
      for (const auto& jt : it.value()) {
        std::vector<ChannelArg> tuple;
        for (const auto& a : jt) {
          if (a.is_number_integer())
            tuple.push_back(a.get<std::int64_t>());
          else if (a.is_string())
            tuple.push_back(a.get<std::string>());
          else
            throw Error("schema_error", "universe entries must be ints or strings");
        }
        tuples.push_back(std::move(tuple));
      }
      sys.universe[it.key()] = std::move(tuples);
    }
  }
  validate_system(sys);
  return sys;
}

}  // namespace hcsp
