#include <cmath>

#include "cli_runner.hpp"
#include "doctest.h"
#include "fixtures.hpp"
#include "json.hpp"
#include "msopt/instance_io.hpp"

using namespace msopt;
using namespace msopt::testing;
using nlohmann::json;

namespace {

struct Files {
  std::filesystem::path dir = scratch_dir("cli");
  std::filesystem::path tiny2 = dir / "tiny2.json";
  std::filesystem::path micro = dir / "micro.json";
  std::filesystem::path bad = dir / "bad.json";

  Files() {
    write_instance(msopt::testing::tiny2(), tiny2);
    write_instance(micro_capacity(), micro);
    std::ofstream(bad) << "{\"schema_version\": \"1\", \"kind\": \"multiscale\"";
  }
};

const Files& files() {
  static const Files f;
  return f;
}

}  // namespace

TEST_CASE("solve fullspace on TINY-2") {
  const auto r = run_cli("solve --algorithm fullspace --instance " + files().tiny2.string());
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["objective"].get<double>() == doctest::Approx(1.5));
  CHECK(j["status"] == "Converged");
}

TEST_CASE("benders with max-iter 0 exits 2") {
  CHECK(run_cli("solve --algorithm benders --max-iter 0 --instance " + files().tiny2.string()).code == 2);
}

TEST_CASE("malformed file exits 1 with a ParseError") {
  const auto r = run_cli("solve --algorithm fullspace --instance " + files().bad.string(), true);
  CHECK(r.code == 1);
  CHECK(r.out.find("ParseError") != std::string::npos);
}

TEST_CASE("usage errors exit 1") {
  CHECK(run_cli("solve --instance " + files().tiny2.string()).code == 1);
  CHECK(run_cli("solve --algorithm simplex --instance " + files().tiny2.string()).code == 1);
  CHECK(run_cli("").code == 1);
}

TEST_CASE("infeasible instance exits 3") {
  const auto path = files().dir / "infeasible.json";
  auto inst = msopt::testing::tiny1();
  inst.first_stage.rows.push_back({{{0, 1.0}}, Sense::LE, -1.0});
  write_instance(inst, path);
  CHECK(run_cli("solve --algorithm fullspace --instance " + path.string()).code == 3);
  CHECK(run_cli("solve --algorithm benders --instance " + path.string()).code == 3);
}

TEST_CASE("metrics on the micro capacity file") {
  const auto r = run_cli("metrics --instance " + files().micro.string());
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["vmm"].get<double>() == doctest::Approx(3.5));
  CHECK(j["mm"].get<double>() == doctest::Approx(7.0));
}

TEST_CASE("metrics vss on TINY-2 and vmm refusal") {
  const auto r = run_cli("metrics --report vss --instance " + files().tiny2.string());
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["vss"].get<double>() == doctest::Approx(0.25));
  const auto v = run_cli("metrics --report vmm --instance " + files().tiny2.string(), true);
  CHECK(v.code == 1);
  CHECK(v.out.find("vmm requires a high-level builder") != std::string::npos);
}

TEST_CASE("generate is deterministic and validates dims") {
  const auto a = files().dir / "gen_a.json";
  const auto b = files().dir / "gen_b.json";
  REQUIRE(run_cli("generate --seed 0 --out " + a.string()).code == 0);
  REQUIRE(run_cli("generate --seed 0 --out " + b.string()).code == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(run_cli("generate --n-subperiods 0").code == 1);
}

TEST_CASE("convert then solve matches solving the capacity file") {
  const auto lowered = files().dir / "micro_ms.json";
  REQUIRE(run_cli("convert --instance " + files().micro.string() + " --out " + lowered.string()).code == 0);
  const auto a = json::parse(run_cli("solve --algorithm fullspace --instance " + files().micro.string()).out);
  const auto b = json::parse(run_cli("solve --algorithm fullspace --instance " + lowered.string()).out);
  CHECK(a["objective"].get<double>() == b["objective"].get<double>());
}

TEST_CASE("CSV log has the fixed header and one row per iteration") {
  const auto csv = files().dir / "log.csv";
  const auto r = run_cli("solve --algorithm benders --instance " + files().tiny2.string() + " --log " + csv.string());
  REQUIRE(r.code == 0);
  const auto text = slurp(csv);
  CHECK(text.rfind("iteration,lower_bound,upper_bound,gap,wall_millis\n", 0) == 0);
  const auto j = json::parse(r.out);
  std::size_t rows = 0;
  for (char c : text) rows += c == '\n';
  CHECK(rows == j["iterations"].get<std::size_t>() + 1);
}

TEST_CASE("all algorithms agree on a generated instance") {
  const auto path = files().dir / "gen_agree.json";
  REQUIRE(run_cli("generate --seed 14 --n-x 3 --n-y 3 --m-sub 2 --n-subperiods 4 --out " + path.string()).code == 0);
  const double mm =
      json::parse(run_cli("solve --algorithm fullspace --instance " + path.string()).out)["objective"].get<double>();
  for (const char* alg : {"benders", "lagrangian-cp", "dw"}) {
    CAPTURE(alg);
    const auto r = run_cli(std::string("solve --algorithm ") + alg + " --instance " + path.string());
    CHECK(r.code == 0);
    CHECK(std::abs(json::parse(r.out)["objective"].get<double>() - mm) <= 1e-4 * (1 + std::abs(mm)));
  }
}

TEST_CASE("pamso runs on capacity files only") {
  const auto r = run_cli("solve --algorithm pamso --budget 50 --instance " + files().micro.string());
  CHECK(r.code == 0);
  CHECK(run_cli("solve --algorithm pamso --instance " + files().tiny2.string()).code == 1);
}
