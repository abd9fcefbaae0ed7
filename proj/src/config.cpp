#include "rlnc/config.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "rlnc/errors.hpp"

namespace rlnc {

namespace {

using ordered_json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& origin, const std::string& what) {
  throw Error(ErrorKind::ParseError, origin + ": " + what);
}

ExperimentConfig parse_experiment(const ordered_json& block,
                                  const std::string& origin) {
  if (!block.is_object()) fail(origin, "\"experiment\" must be an object");
  ExperimentConfig cfg;
  for (auto it = block.begin(); it != block.end(); ++it) {
    const std::string& key = it.key();
    try {
      if (key == "engine") {
        cfg.engine = engine_from_string(it.value().get<std::string>());
      } else if (key == "buffers") {
        cfg.buffers = it.value().get<std::vector<int>>();
      } else if (key == "epochs") {
        cfg.epochs = it.value().get<std::uint64_t>();
      } else if (key == "block_size") {
        cfg.block_size = it.value().get<std::uint64_t>();
      } else if (key == "replicas") {
        cfg.replicas = it.value().get<std::uint64_t>();
      } else if (key == "field_width") {
        cfg.field_width = it.value().get<int>();
        if (cfg.field_width != 8 && cfg.field_width != 16)
          fail(origin, "field_width must be 8 or 16");
      } else if (key == "seed") {
        cfg.seed = it.value().get<std::uint64_t>();
      } else if (key == "out") {
        cfg.out = it.value().get<std::string>();
      } else {
        fail(origin, "unknown experiment field \"" + key + "\"");
      }
    } catch (const ordered_json::exception& e) {
      fail(origin, "experiment field \"" + key + "\": " + e.what());
    } catch (const Error& e) {
      fail(origin, "experiment field \"" + key + "\": " + e.what());
    }
  }
  for (int m : cfg.buffers)
    if (m < 1) fail(origin, "buffer sweep values must be positive");
  return cfg;
}

NetworkDescription parse_description(const ordered_json& root,
                                     const std::string& origin) {
  if (!root.is_object()) fail(origin, "top-level value must be an object");
  NetworkDescription d;
  if (!root.contains("nodes") || !root.at("nodes").is_array())
    fail(origin, "\"nodes\" must be an array");
  for (const auto& jn : root.at("nodes")) {
    if (!jn.is_object() || !jn.contains("id") || !jn.at("id").is_string())
      fail(origin, "every node needs a string \"id\"");
    d.node_ids.push_back(jn.at("id").get<std::string>());
    int buffer = 1;
    if (jn.contains("buffer")) {
      if (!jn.at("buffer").is_number_integer())
        fail(origin, "node \"" + d.node_ids.back() +
                         "\": \"buffer\" must be an integer");
      buffer = jn.at("buffer").get<int>();
    }
    d.buffers.push_back(buffer);
  }
  if (!root.contains("edges") || !root.at("edges").is_array())
    fail(origin, "\"edges\" must be an array");
  for (const auto& je : root.at("edges")) {
    if (!je.is_object() || !je.contains("from") || !je.contains("to") ||
        !je.contains("erasure"))
      fail(origin, "every edge needs \"from\", \"to\" and \"erasure\"");
    NetworkDescription::RawEdge e;
    if (!je.at("from").is_string() || !je.at("to").is_string())
      fail(origin, "edge endpoints must be node id strings");
    e.from = je.at("from").get<std::string>();
    e.to = je.at("to").get<std::string>();
    const auto& eps = je.at("erasure");
    if (eps.is_string()) {
      e.erasure_text = eps.get<std::string>();
      e.erasure = Rational::from_decimal(e.erasure_text).to_double();
    } else if (eps.is_number()) {
      e.erasure = eps.get<double>();
    } else {
      fail(origin, "\"erasure\" must be a number or a decimal string");
    }
    d.edges.push_back(std::move(e));
  }
  if (!root.contains("source") || !root.contains("dest"))
    throw Error(ErrorKind::MissingSourceOrDest,
                origin + ": \"source\" and \"dest\" are required");
  if (!root.at("source").is_string() || !root.at("dest").is_string())
    fail(origin, "\"source\" and \"dest\" must be node id strings");
  d.source = root.at("source").get<std::string>();
  d.dest = root.at("dest").get<std::string>();
  return d;
}

ParsedConfig parse_document(const ordered_json& root,
                            const std::string& origin) {
  ParsedConfig out;
  out.description = parse_description(root, origin);
  out.network = ErasureNetwork::validate(out.description);
  if (root.contains("experiment"))
    out.experiment = parse_experiment(root.at("experiment"), origin);
  return out;
}

}  // namespace

const char* to_string(EngineKind kind) {
  switch (kind) {
    case EngineKind::Packetized: return "packetized";
    case EngineKind::Occupancy: return "occupancy";
    case EngineKind::Chain: return "chain";
    case EngineKind::Reduced: return "reduced";
  }
  return "unknown";
}

EngineKind engine_from_string(const std::string& name) {
  if (name == "packetized") return EngineKind::Packetized;
  if (name == "occupancy") return EngineKind::Occupancy;
  if (name == "chain") return EngineKind::Chain;
  if (name == "reduced") return EngineKind::Reduced;
  throw Error(ErrorKind::UsageError,
              "unknown engine \"" + name +
                  "\" (expected packetized, occupancy, chain or reduced)");
}

ParsedConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, path + ": cannot open file");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config_text(text.str(), path);
}

ParsedConfig parse_config_text(const std::string& text,
                               const std::string& origin) {
  ordered_json root;
  try {
    root = ordered_json::parse(text);
  } catch (const ordered_json::parse_error& e) {
    fail(origin, e.what());
  }
  return parse_document(root, origin);
}

std::string serialize_config(const ErasureNetwork& net) {
  const NetworkDescription d = serialize_network(net);
  ordered_json root;
  root["nodes"] = ordered_json::array();
  for (std::size_t i = 0; i < d.node_ids.size(); ++i) {
    ordered_json jn;
    jn["id"] = d.node_ids[i];
    if (d.node_ids[i] != d.source && d.node_ids[i] != d.dest)
      jn["buffer"] = d.buffers[i];
    root["nodes"].push_back(std::move(jn));
  }
  root["edges"] = ordered_json::array();
  for (const auto& e : d.edges) {
    ordered_json je;
    je["from"] = e.from;
    je["to"] = e.to;
    if (!e.erasure_text.empty())
      je["erasure"] = e.erasure_text;
    else
      je["erasure"] = e.erasure;
    root["edges"].push_back(std::move(je));
  }
  root["source"] = d.source;
  root["dest"] = d.dest;
  return root.dump(2) + "\n";
}

}  // namespace rlnc
