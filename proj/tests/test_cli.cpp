#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sqz/cli.hpp"
#include "sqz/svg.hpp"

using namespace sqz;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("sqzlab_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int& counter() {
    static int c = 0;
    return c;
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("domain JSON parsing and validation") {
  CHECK(parse_domain(parse_json_text(R"({"type":"annulus","r":0.25})")).ring.has_value());
  CHECK(parse_domain(parse_json_text(
                         R"({"type":"slit_disk","symmetric":{"n":3,"r":0.5,"alpha":0.2}})"))
            .slit_disk->slits.size() == 2);
  CHECK(parse_domain(parse_json_text(
                         R"({"type":"ring","outer":{"kind":"circle","radius":1.0},
                             "inner":{"kind":"arc","radius":0.5,"center_angle":0,"half_width":0.3}})"))
            .ring.has_value());
  CHECK(parse_domain(parse_json_text(R"({"type":"threefold_example","a":2.0})"))
            .threefold.has_value());
  CHECK_THROWS_AS(parse_domain(parse_json_text(R"({"type":"wat"})")),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_domain(parse_json_text(R"({"r":0.3})")), std::invalid_argument);
  CHECK_THROWS_AS(load_domain_arg("annulus:1.5"), std::domain_error);
}

TEST_CASE("malformed JSON reports line and column") {
  try {
    parse_json_text("{\n  \"type\": annulus\n}");
    CHECK(false);
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    CHECK(msg.find("line 2") != std::string::npos);
    CHECK(msg.find("column") != std::string::npos);
  }
}

TEST_CASE("squeeze command produces the closed-form annulus value") {
  TempDir tmp;
  RunConfig cfg;
  cfg.command = "squeeze";
  cfg.domain_arg = "annulus:0.25";
  cfg.z_re = 0.3;
  cfg.output = tmp.file("squeeze.json");
  CHECK(run(cfg) == kExitOk);
  const Json j = parse_json_text(slurp(cfg.output));
  CHECK(j["result"]["kind"] == "exact");
  CHECK(std::abs(j["result"]["value"].get<double>() - 0.25 / 0.3) < 1e-9);
}

TEST_CASE("modulus command reproduces the annulus formula") {
  TempDir tmp;
  RunConfig cfg;
  cfg.command = "modulus";
  cfg.domain_arg = "annulus:0.2";
  cfg.resolution = 128;
  cfg.output = tmp.file("modulus.json");
  CHECK(run(cfg) == kExitOk);
  const Json j = parse_json_text(slurp(cfg.output));
  const double want = std::log(5.0) / (2 * M_PI);
  CHECK(std::abs(j["result"]["value"].get<double>() - want) / want < 0.01);
}

TEST_CASE("identical invocations are byte-identical and cache hits") {
  TempDir tmp;
  RunConfig cfg;
  cfg.command = "squeeze";
  cfg.domain_arg = "annulus:0.25";
  cfg.z_re = 0.42;
  cfg.cache_dir = tmp.file("cache");
  cfg.output = tmp.file("a.json");
  CHECK(run(cfg) == kExitOk);
  const std::string first = slurp(cfg.output);

  cfg.output = tmp.file("b.json");
  CHECK(run(cfg) == kExitOk);  // served from cache
  CHECK(slurp(cfg.output) == first);

  // distinct key on resolution change
  RunConfig cfg2 = cfg;
  cfg2.resolution = 300;
  const Json inputs{{"x", 1}};
  CHECK(cache_key(cfg, inputs) != cache_key(cfg2, inputs));

  // corrupted cache entries are recomputed, not trusted
  int entries = 0;
  for (const auto& f : fs::directory_iterator(cfg.cache_dir)) {
    std::ofstream out(f.path(), std::ios::trunc);
    out << "{broken";
    ++entries;
  }
  CHECK(entries >= 1);
  cfg.output = tmp.file("c.json");
  CHECK(run(cfg) == kExitOk);
  CHECK(slurp(cfg.output) == first);
}

TEST_CASE("cache keys separate commands and versions") {
  RunConfig a;
  a.command = "squeeze";
  RunConfig b = a;
  b.command = "modulus";
  const Json inputs{{"domain", "annulus"}};
  CHECK(cache_key(a, inputs) != cache_key(b, inputs));
}

TEST_CASE("sweep emits deterministic CSV with interval columns") {
  TempDir tmp;
  RunConfig cfg;
  cfg.command = "sweep";
  cfg.domain_arg = "annulus:0.25";
  cfg.format = "csv";
  cfg.samples = 8;
  cfg.resolution = 64;
  cfg.output = tmp.file("sweep.csv");
  CHECK(run(cfg) == kExitOk);
  const std::string csv = slurp(cfg.output);
  CHECK(csv.rfind("z_re,z_im,S_lo,S_hi,direction\n", 0) == 0);
  cfg.output = tmp.file("sweep2.csv");
  CHECK(run(cfg) == kExitOk);
  CHECK(slurp(cfg.output) == csv);  // determinism
}

TEST_CASE("verify rw passes and prints raw numbers") {
  RunConfig cfg;
  cfg.command = "verify";
  cfg.suite = "rw";
  CHECK(run(cfg) == kExitOk);
}

TEST_CASE("unknown verify suite is a usage error") {
  RunConfig cfg;
  cfg.command = "verify";
  cfg.suite = "nope";
  CHECK(run(cfg) == kExitUsage);
}

TEST_CASE("malformed domain is a usage error with code 1") {
  RunConfig cfg;
  cfg.command = "squeeze";
  cfg.domain_arg = "{\"type\":";
  CHECK(run(cfg) == kExitUsage);
}

TEST_CASE("svg output is well-formed") {
  TempDir tmp;
  RunConfig cfg;
  cfg.command = "plot";
  cfg.domain_arg = R"({"type":"slit_disk","symmetric":{"n":3,"r":0.5,"alpha":0.3}})";
  cfg.format = "svg";
  cfg.output = tmp.file("plot.svg");
  CHECK(run(cfg) == kExitOk);
  const std::string svg = slurp(cfg.output);
  CHECK(svg.rfind("<?xml", 0) == 0);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("unit circle") != std::string::npos);  // legend
  // every element closes
  std::size_t opens = 0, closes = 0, selfclosed = 0;
  for (std::size_t i = 0; i + 1 < svg.size(); ++i) {
    if (svg[i] == '<' && svg[i + 1] != '/' && svg[i + 1] != '?') ++opens;
    if (svg[i] == '<' && svg[i + 1] == '/') ++closes;
    if (svg[i] == '/' && svg[i + 1] == '>') ++selfclosed;
  }
  CHECK(opens == closes + selfclosed);
}

TEST_CASE("slit-map CSV has the sampled boundary images") {
  TempDir tmp;
  RunConfig cfg;
  cfg.command = "slit-map";
  cfg.q = 0.1;
  cfg.a = 0.4;
  cfg.format = "csv";
  cfg.samples = 16;
  cfg.output = tmp.file("map.csv");
  CHECK(run(cfg) == kExitOk);
  const std::string csv = slurp(cfg.output);
  CHECK(csv.find("circle,theta") == 0);
  // inner circle images sit on |w| = 0.4
  std::istringstream is(csv);
  std::string line;
  std::getline(is, line);
  bool saw_inner = false;
  while (std::getline(is, line)) {
    if (line.rfind("inner,", 0) == 0) {
      const auto pos = line.find_last_of(',');
      CHECK(std::abs(std::stod(line.substr(pos + 1)) - 0.4) < 1e-8);
      saw_inner = true;
    }
  }
  CHECK(saw_inner);
}
