#include <doctest.h>

#include <charconv>
#include <random>
#include <sstream>

#include "qlcod/error.hpp"
#include "qlcod/run.hpp"

using namespace qlcod;

namespace {

ErrorCode code_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Computation;
}

std::string message_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

std::string body(const std::string& csv) {
  std::istringstream in(csv);
  std::string line, out;
  while (std::getline(in, line))
    if (line.empty() || line[0] != '#') out += line + "\n";
  return out;
}

}  // namespace

TEST_SUITE("run") {

TEST_CASE("minimal config takes the weak-regime defaults") {
  const RunConfig c = parse_config(R"({"mode": "quantum-steady"})");
  CHECK(c.mode == RunMode::QuantumSteady);
  CHECK(c.n_max == 16);
  CHECK(c.params == SystemParams{2.0, 1.0, 0.2, 1.0, 0.0});
  CHECK(c.grid == PhaseGrid::weak_default());
  CHECK_FALSE(c.truncation_check.has_value());
}

TEST_CASE("deep-regime params pick the deep grid") {
  const RunConfig c = parse_config(R"({"mode": "quantum-steady", "params": {"k2": 3}})");
  CHECK(c.grid == PhaseGrid::deep_default());
}

TEST_CASE("rejections name the offending key") {
  CHECK(code_of(R"({"mode": "quantum-steady", "params": {"k2": 0}})") == ErrorCode::Config);
  CHECK(message_of(R"({"mode": "quantum-steady", "params": {"k2": 0}})").find("params.k2") != std::string::npos);
  CHECK(message_of(R"({"mode": "quantum-steady", "params": {"kappa": 1}})").find("kappa") != std::string::npos);
  CHECK(message_of(R"({"mode": "quantum-steady", "kappa": 1})").find("kappa") != std::string::npos);
  CHECK(message_of(R"({"mode": "quantum-steady", "n_max": "big"})").find("n_max") != std::string::npos);
  CHECK(message_of(R"({"mode": "quantum-sweep"})").find("sweep") != std::string::npos);
  CHECK(message_of(R"({"mode": "quantum-sweep", "sweep": {"parameter": "eps_over_k1", "values": [2, 1]}})")
            .find("sweep.values") != std::string::npos);
  CHECK(message_of(R"({"mode": "quantum-sweep", "sweep": {"parameter": "eps_over_k1", "values": []}})")
            .find("sweep.values") != std::string::npos);
  CHECK(message_of(R"({"mode": "fly"})").find("mode") != std::string::npos);
  CHECK(message_of(R"({"params": {}})").find("mode") != std::string::npos);
  CHECK(message_of(R"({"mode": "sde-ensemble", "sweep": {"parameter": "eps_over_k1", "values": [1]},
                       "sde": {"dt": 0.1}})").find("sde") != std::string::npos);
  CHECK(code_of("{not json") == ErrorCode::Config);
  CHECK(code_of("[1, 2]") == ErrorCode::Config);
}

TEST_CASE("mode supplied by the caller") {
  const RunConfig c = parse_config(R"({"sweep": {"parameter": "kerr", "values": [1, 2]}})", RunMode::ClassicalScan);
  CHECK(c.mode == RunMode::ClassicalScan);
  CHECK_THROWS_AS(parse_config(R"({"mode": "quantum-steady"})", RunMode::ClassicalScan), Error);
}

TEST_CASE("canonical form parses back to the same computation") {
  const RunConfig c = parse_config(R"({"mode": "sde-ensemble", "params": {"epsilon": 0.5},
      "sweep": {"parameter": "eps_over_k1", "values": [0.01, 1, 4]},
      "sde": {"t_final": 20, "n_trajectories": 3, "scheme": "euler-maruyama"}, "seed": 42, "threads": 2})");
  const std::string canon = canonical_json(c);
  const RunConfig back = parse_config(canon);
  CHECK(canonical_json(back) == canon);
  CHECK(back.seed == 42);
  CHECK(back.sde.base_seed == 42);
  CHECK(back.sde.n_steps == 20'000);
  CHECK(back.sde.scheme == SdeScheme::EulerMaruyama);
  CHECK(canon.find("threads") == std::string::npos);
}

TEST_CASE("shortest round-trip number formatting") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int k = 0; k < 1000; ++k) {
    const double v = u(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
    const std::string s = format_double(v);
    double back = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), back);
    CHECK(back == v);
  }
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(3.0) == "3");
}

TEST_CASE("classical scan output and determinism") {
  const std::string text = R"({"mode": "classical-scan", "params": {"epsilon": 3},
      "sweep": {"parameter": "kerr", "values": [2, 6]}})";
  const RunConfig c = parse_config(text);
  std::ostringstream a, b;
  const RunSummary s = run(c, a);
  run(parse_config(text), b);
  CHECK(s.points == 2);
  CHECK(s.failed == 0);
  CHECK(a.str() == b.str());
  const std::string csv = a.str();
  CHECK(csv.rfind("# qlcod ", 0) == 0);
  CHECK(csv.find("# config={") != std::string::npos);
  CHECK(csv.find("# seed=0") != std::string::npos);
  CHECK(body(csv).rfind("param,classification,amplitude,x1,y1,x2,y2,errors\n", 0) == 0);
  CHECK(csv.find("\n2,steady-state,") != std::string::npos);
  CHECK(csv.find("\n6,limit-cycle,") != std::string::npos);
}

TEST_CASE("quantum sweep rows follow the input order for any thread count") {
  const std::string text = R"({"mode": "quantum-sweep", "params": {"k2": 3}, "n_max": 5,
      "sweep": {"parameter": "eps_over_k1", "values": [0, 1, 3]}})";
  RunConfig one = parse_config(text);
  one.threads = 1;
  RunConfig three = parse_config(text);
  three.threads = 3;
  std::ostringstream a, b;
  run(one, a);
  run(three, b);
  CHECK(a.str() == b.str());
  const std::string rows = body(a.str());
  CHECK(rows.rfind("eps_over_k1,mean_phonon_1,mean_phonon_2,delta_y,classification,negativity,renyi2,errors\n", 0) == 0);
  const auto first = rows.find("\n0,");
  const auto second = rows.find("\n1,");
  const auto third = rows.find("\n3,");
  CHECK(first < second);
  CHECK(second < third);
}

TEST_CASE("two-parameter map adds a kerr column") {
  const RunConfig c = parse_config(R"({"mode": "quantum-sweep", "n_max": 4,
      "sweep": {"parameter": "eps_over_k1", "values": [0.5, 3]},
      "sweep2": {"parameter": "kerr", "values": [1, 4]}})");
  std::ostringstream out;
  const RunSummary s = run(c, out);
  CHECK(s.points == 4);
  CHECK(body(out.str()).rfind("kerr,eps_over_k1,", 0) == 0);
}

TEST_CASE("per-point failures fill the errors column") {
  const RunConfig c = parse_config(R"({"mode": "sde-ensemble", "params": {"k2": 3},
      "sweep": {"parameter": "eps_over_k1", "values": [0, 1]}, "sde": {"t_final": 2, "n_trajectories": 1}})");
  std::ostringstream out;
  const RunSummary s = run(c, out);
  CHECK(s.total_failure());
  CHECK(out.str().find("weak quantum regime") != std::string::npos);
}

TEST_CASE("wigner export and entanglement sweep schemas") {
  std::ostringstream w, e, q;
  run(parse_config(R"({"mode": "wigner-export", "n_max": 4, "grid": {"n_x": 16, "n_y": 16}})"), w);
  CHECK(body(w.str()).rfind("x,y,w\n", 0) == 0);
  run(parse_config(R"({"mode": "entanglement-sweep", "n_max": 4, "params": {"k2": 3},
      "sweep": {"parameter": "eps_over_k1", "values": [0, 2]}})"), e);
  CHECK(body(e.str()).rfind("eps_over_k1,negativity,renyi2,errors\n", 0) == 0);
  run(parse_config(R"({"mode": "quantum-steady", "n_max": 4})"), q);
  CHECK(body(q.str()).rfind("n,p_site1,p_site2,errors\n", 0) == 0);
  CHECK(q.str().find("# mean_phonon_1=") != std::string::npos);
}

TEST_CASE("truncation check columns") {
  const RunConfig c = parse_config(R"({"mode": "quantum-sweep", "n_max": 4, "params": {"k2": 3},
      "sweep": {"parameter": "eps_over_k1", "values": [0]},
      "truncation_check": {"step": 2, "rel_tol": 1e-3, "n_cap": 12}})");
  std::ostringstream out;
  run(c, out);
  CHECK(body(out.str()).find("n_max_used,truncation_rel_change,errors") != std::string::npos);
}

}  // TEST_SUITE
