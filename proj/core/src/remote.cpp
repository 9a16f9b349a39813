#include "xdq/remote.hpp"

#include <httplib.h>
#include <json.hpp>

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <regex>
#include <sstream>
#include <thread>

#include "xdq/dataio.hpp"
#include "xdq/errors.hpp"

namespace xdq {

namespace {

std::string env_or(const char* name, std::string fallback) {
  const char* v = std::getenv(name);
  return v ? std::string(v) : std::move(fallback);
}

std::string strip_dot(std::string s) {
  std::erase(s, '.');
  return s;
}

}  // namespace

RemoteConfig RemoteConfig::from_env() {
  RemoteConfig c;
  c.base_url = env_or("XDQ_LMFDB_URL", "");
  c.path_template = env_or("XDQ_LMFDB_PATH", c.path_template);
  c.cache_dir = env_or("XDQ_CACHE_DIR", "");
  return c;
}

namespace remote {

bool valid_label(std::string_view label) {
  static const std::regex re(R"(^[1-9][0-9]{0,8}\.?[a-z]{1,4}[0-9]{0,3}$)");
  return std::regex_match(label.begin(), label.end(), re);
}

EllipticCurveRecord record_from_json(std::string_view text) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaDriftError(std::string("response is not JSON: ") + e.what());
  }
  if (!j.is_object()) throw SchemaDriftError("response is not a JSON object");

  auto need = [&](const char* key) -> const json& {
    if (!j.contains(key)) throw SchemaDriftError(std::string("missing field '") + key + "'");
    return j.at(key);
  };
  auto integer = [&](const char* key) -> Int {
    const json& v = need(key);
    if (!v.is_number_integer()) throw SchemaDriftError(std::string("field '") + key + "' is not an integer");
    return v.get<Int>();
  };
  auto text_field = [&](const char* key) -> std::string {
    const json& v = need(key);
    if (!v.is_string()) throw SchemaDriftError(std::string("field '") + key + "' is not a string");
    return v.get<std::string>();
  };

  EllipticCurveRecord e;
  e.label = text_field("label");
  e.conductor = integer("conductor");
  e.a1 = integer("a1");
  e.a2 = integer("a2");
  e.a3 = integer("a3");
  e.a4 = integer("a4");
  e.a6 = integer("a6");
  e.rank = integer("rank");
  e.analytic_rank = integer("analytic_rank");
  e.modular_degree = integer("modular_degree");
  e.isogeny_class = text_field("isogeny_class");

  const json& iso = need("isogeny_degrees");
  if (iso.is_string()) {
    // same encoding as the CSV column
    std::istringstream in(iso.get<std::string>());
    std::string item;
    while (std::getline(in, item, ';')) {
      const auto colon = item.find(':');
      if (colon == std::string::npos) throw SchemaDriftError("bad isogeny_degrees entry '" + item + "'");
      try {
        e.isogeny_degrees.emplace_back(item.substr(0, colon), std::stoll(item.substr(colon + 1)));
      } catch (const std::logic_error&) {
        throw SchemaDriftError("bad isogeny_degrees entry '" + item + "'");
      }
    }
  } else if (iso.is_object()) {
    for (const auto& [k, v] : iso.items()) {
      if (!v.is_number_integer()) throw SchemaDriftError("isogeny degree for " + k + " is not an integer");
      e.isogeny_degrees.emplace_back(k, v.get<Int>());
    }
  } else {
    throw SchemaDriftError("field 'isogeny_degrees' has an unexpected type");
  }

  if (const auto why = dataio::record_problem(e); !why.empty()) throw DomainError(e.label + ": " + why);
  return e;
}

std::string record_to_json(const EllipticCurveRecord& e) {
  nlohmann::json j{{"label", e.label},
                   {"conductor", e.conductor},
                   {"a1", e.a1},
                   {"a2", e.a2},
                   {"a3", e.a3},
                   {"a4", e.a4},
                   {"a6", e.a6},
                   {"rank", e.rank},
                   {"analytic_rank", e.analytic_rank},
                   {"modular_degree", e.modular_degree},
                   {"isogeny_class", e.isogeny_class}};
  nlohmann::json iso = nlohmann::json::object();
  for (const auto& [l, d] : e.isogeny_degrees) iso[l] = d;
  j["isogeny_degrees"] = iso;
  return j.dump();
}

Client::Client(RemoteConfig cfg) : cfg_(std::move(cfg)) {}

std::filesystem::path Client::cache_file(const std::string& label) const { return cfg_.cache_dir / (label + ".json"); }

std::optional<EllipticCurveRecord> Client::cached(const std::string& label) const {
  if (cfg_.cache_dir.empty() || !valid_label(label)) return std::nullopt;
  std::ifstream in(cache_file(label), std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return record_from_json(ss.str());
  } catch (const Error&) {
    return std::nullopt;  // stale or damaged entry, treat as a miss
  }
}

void Client::store(const std::string& label, const std::string& body) {
  if (cfg_.cache_dir.empty()) return;
  static std::atomic<unsigned> serial{0};
  std::lock_guard lock(write_mu_);
  std::filesystem::create_directories(cfg_.cache_dir);
  std::ostringstream tmp_name;
  tmp_name << label << ".json.tmp" << std::hash<std::thread::id>{}(std::this_thread::get_id()) << '.' << serial++;
  const auto tmp = cfg_.cache_dir / tmp_name.str();
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << body;
    if (!out) throw Error("cannot write cache file " + tmp.string());
  }
  std::filesystem::rename(tmp, cache_file(label));
}

EllipticCurveRecord Client::fetch(const std::string& label) {
  if (!valid_label(label)) throw DomainError("'" + label + "' is not a curve label");
  if (!cfg_.online()) {
    if (auto hit = cached(label)) return *hit;
    throw NetworkError("offline (XDQ_LMFDB_URL empty) and " + label + " is not cached");
  }

  std::string path = cfg_.path_template;
  if (const auto at = path.find("{label}"); at != std::string::npos) path.replace(at, 7, label);
  else path += label;

  httplib::Client cli(cfg_.base_url);
  if (!cli.is_valid()) throw NetworkError("cannot use endpoint " + cfg_.base_url);
  cli.set_connection_timeout(cfg_.timeout_seconds, 0);
  cli.set_read_timeout(cfg_.timeout_seconds, 0);
  auto res = cli.Get(path);
  if (!res) throw NetworkError("GET " + cfg_.base_url + path + ": " + httplib::to_string(res.error()));
  if (res->status == 404) throw UnknownLabelError("unknown curve label " + label);
  if (res->status != 200) throw NetworkError("GET " + path + ": HTTP " + std::to_string(res->status));

  EllipticCurveRecord e = record_from_json(res->body);
  if (strip_dot(e.label) != strip_dot(label))
    throw SchemaDriftError("asked for " + label + ", endpoint returned " + e.label);
  store(label, record_to_json(e));
  return e;
}

EllipticCurveRecord fetch_remote(const std::string& label) {
  Client client(RemoteConfig::from_env());
  return client.fetch(label);
}

}  // namespace remote
}  // namespace xdq
