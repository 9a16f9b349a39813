#include <doctest.h>
#include <httplib.h>
#include <json.hpp>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <thread>

#include <unistd.h>

#include "xdq/dataio.hpp"
#include "xdq/errors.hpp"
#include "xdq/remote.hpp"

using namespace xdq;
namespace fs = std::filesystem;

namespace {

const EllipticCurveRecord& c37() {
  static const CurveDataset d = dataio::load_dataset(std::string(XDQ_TEST_DATA_DIR) + "/curves.csv");
  return *d.find("37a1");
}

// canned answers keyed by label
struct FakeServer {
  httplib::Server srv;
  std::thread th;
  int port = 0;
  std::atomic<int> hits{0};

  FakeServer() {
    srv.Get(R"(/api/elliptic_curve/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
      ++hits;
      const std::string label = req.matches[1];
      if (label == "37a1" || label == "37.a1") {
        res.set_content(remote::record_to_json(c37()), "application/json");
      } else if (label == "11a1") {
        res.set_content("{\"label\": \"11a1\", ", "application/json");  // truncated
      } else if (label == "14a1") {
        auto j = nlohmann::json::parse(remote::record_to_json(c37()));
        j["label"] = "14a1";
        j.erase("modular_degree");
        res.set_content(j.dump(), "application/json");
      } else if (label == "15a1") {
        auto j = nlohmann::json::parse(remote::record_to_json(c37()));
        j["conductor"] = "37";  // string where a number belongs
        j["label"] = "15a1";
        res.set_content(j.dump(), "application/json");
      } else if (label == "19a1") {
        res.set_content(remote::record_to_json(c37()), "application/json");  // wrong record
      } else if (label == "20a1") {
        res.status = 500;
      } else {
        res.status = 404;
      }
    });
    port = srv.bind_to_any_port("127.0.0.1");
    th = std::thread([this] { srv.listen_after_bind(); });
    srv.wait_until_ready();
  }
  ~FakeServer() {
    srv.stop();
    th.join();
  }
  std::string url() const { return "http://127.0.0.1:" + std::to_string(port); }
};

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("xdq_test_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("labels") {
  for (const char* ok : {"37a1", "37.a1", "11a", "5077a1", "210bb3"}) CHECK(remote::valid_label(ok));
  for (const char* bad : {"", "a1", "037a1", "37A1", "37a1/../x", "37 a1", "37a1a"}) CHECK_FALSE(remote::valid_label(bad));
}

TEST_CASE("json round trip and schema checks") {
  const auto& e = c37();
  CHECK(remote::record_from_json(remote::record_to_json(e)) == e);
  CHECK_THROWS_AS(remote::record_from_json("not json"), SchemaDriftError);
  CHECK_THROWS_AS(remote::record_from_json("[1,2]"), SchemaDriftError);
  auto j = nlohmann::json::parse(remote::record_to_json(e));
  j["isogeny_degrees"] = "37a1:1";
  CHECK(remote::record_from_json(j.dump()) == e);
  j["isogeny_degrees"] = 7;
  CHECK_THROWS_AS(remote::record_from_json(j.dump()), SchemaDriftError);
  j = nlohmann::json::parse(remote::record_to_json(e));
  j["a6"] = 5;  // still parses, fails the model checks
  CHECK_THROWS_AS(remote::record_from_json(j.dump()), DomainError);
}

TEST_CASE("client against a local server") {
  FakeServer server;
  const auto cache = fresh_dir("cache");
  remote::Client client(RemoteConfig{server.url(), "/api/elliptic_curve/{label}", cache, 5});

  CHECK(client.fetch("37a1") == c37());
  CHECK(fs::exists(cache / "37a1.json"));
  CHECK(client.fetch("37.a1") == c37());
  CHECK_THROWS_AS(client.fetch("389a1"), UnknownLabelError);
  CHECK_THROWS_AS(client.fetch("11a1"), SchemaDriftError);
  CHECK_THROWS_AS(client.fetch("14a1"), SchemaDriftError);
  CHECK_THROWS_AS(client.fetch("15a1"), SchemaDriftError);
  CHECK_THROWS_AS(client.fetch("19a1"), SchemaDriftError);
  CHECK_THROWS_AS(client.fetch("20a1"), NetworkError);
  CHECK_THROWS_AS(client.fetch("../etc"), DomainError);
  CHECK_FALSE(fs::exists(cache / "11a1.json"));
  CHECK_FALSE(fs::exists(cache / "389a1.json"));

  // concurrent fetches of the same label leave one readable cache entry
  std::vector<std::thread> pool;
  std::atomic<int> good{0};
  for (int i = 0; i < 8; ++i)
    pool.emplace_back([&] {
      if (client.fetch("37a1") == c37()) ++good;
    });
  for (auto& t : pool) t.join();
  CHECK(good == 8);
  CHECK(client.cached("37a1") == c37());
  fs::remove_all(cache);
}

TEST_CASE("offline mode uses the cache") {
  const auto cache = fresh_dir("offline");
  {
    FakeServer server;
    remote::Client warm(RemoteConfig{server.url(), "/api/elliptic_curve/{label}", cache, 5});
    warm.fetch("37a1");
  }
  remote::Client offline(RemoteConfig{"", "/api/elliptic_curve/{label}", cache, 5});
  CHECK_FALSE(offline.config().online());
  CHECK(offline.fetch("37a1") == c37());
  CHECK_THROWS_AS(offline.fetch("43a1"), NetworkError);

  // a damaged entry is a miss, not a crash
  std::ofstream(cache / "43a1.json") << "{ broken";
  CHECK_FALSE(offline.cached("43a1"));
  CHECK_THROWS_AS(offline.fetch("43a1"), NetworkError);

  remote::Client no_cache(RemoteConfig{"", "/api/elliptic_curve/{label}", "", 5});
  CHECK_THROWS_AS(no_cache.fetch("37a1"), NetworkError);
  fs::remove_all(cache);
}

TEST_CASE("connection refused") {
  int port = 0;
  {
    httplib::Server s;
    port = s.bind_to_any_port("127.0.0.1");
  }  // closed again, nothing listens there now
  remote::Client client(RemoteConfig{"http://127.0.0.1:" + std::to_string(port), "/api/elliptic_curve/{label}", "", 2});
  CHECK_THROWS_AS(client.fetch("37a1"), NetworkError);
}
