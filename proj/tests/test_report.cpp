#include <fstream>
#include <sstream>
#include <string>

#include "blindsim/report.hpp"
#include "doctest.h"

using namespace blindsim;

namespace {

std::string read_golden(const std::string& name) {
  std::ifstream in(std::string(BLINDSIM_GOLDEN_DIR) + "/" + name);
  REQUIRE(in.good());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

RunStats sample_stats() {
  RunStats s;
  s.gates_total = 1000;
  s.clicks = 12;
  s.double_clicks = 1;
  s.sifted_bits = 3;
  s.errors = 1;
  s.qber = 1.0 / 3.0;
  s.eve_known_fraction = 1.0;
  s.raw_click_rate_hz = 1.2e6;
  s.alarms = 0;
  return s;
}

}  // namespace

TEST_CASE("csv header matches the golden file") {
  const std::string csv = format_stats(sample_stats(), OutputFormat::csv);
  const std::string header = csv.substr(0, csv.find('\n') + 1);
  CHECK(header == read_golden("stats_header.csv"));
  CHECK(csv == header + "1000,12,1,3,1,0.33333333333333331,1,1200000,0\n");
}

TEST_CASE("undefined ratios") {
  RunStats empty;
  empty.gates_total = 10;
  const std::string text = format_stats(empty, OutputFormat::text);
  CHECK(text.find("qber                NA\n") != std::string::npos);
  CHECK(text.find("eve_known_fraction  NA\n") != std::string::npos);
  CHECK(format_stats(empty, OutputFormat::jsonl) ==
        "{\"gates_total\":10,\"clicks\":0,\"double_clicks\":0,\"sifted_bits\":0,\"errors\":0,"
        "\"qber\":null,\"eve_known_fraction\":null,\"raw_click_rate_hz\":0,\"alarms\":0}\n");
  CHECK(format_stats(empty, OutputFormat::csv).ends_with("\n10,0,0,0,0,,,0,0\n"));
}

TEST_CASE("formatting is deterministic") {
  for (auto f : {OutputFormat::text, OutputFormat::csv, OutputFormat::jsonl}) {
    CHECK(format_stats(sample_stats(), f) == format_stats(sample_stats(), f));
  }
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(parse_output_format("jsonl") == OutputFormat::jsonl);
  CHECK_THROWS_AS(parse_output_format("xml"), std::invalid_argument);
}

TEST_CASE("event log lines") {
  GateRecord r;
  r.gate_index = 42;
  r.alice = {Basis::X, Bit::one, 0.1};
  r.bob_basis = Basis::X;
  r.click1 = true;
  r.sifted = true;
  CHECK(format_event(r) == "42,X,1,0.10000000000000001,,,X,0,1,1,0");
  r.eve_basis = Basis::Z;
  r.eve_bit = Bit::zero;
  CHECK(format_event(r) == "42,X,1,0.10000000000000001,Z,0,X,0,1,1,0");
  std::string_view header = event_log_header();
  CHECK(std::count(header.begin(), header.end(), ',') == 10);
}

TEST_CASE("budget table at display precision") {
  const auto rows = table1({Power::nanowatts(35), Energy::femtojoules(15.4),
                            Energy::femtojoules(25.8)},
                           ScwChain{});
  CHECK(format_budget(rows, OutputFormat::csv) ==
        "stage,blinding_power_nW,e_always_fJ,e_never_fJ\n"
        "subcarriers_after_filtering,35.0,25.8,15.4\n"
        "spectrum_before_modulation,700,516,308\n"
        "spectrum_entering_bob,3056,2252,1344\n");
  const std::string text = format_budget(rows, OutputFormat::text);
  CHECK(text.find("3056") != std::string::npos);
  CHECK(text.find("Blinding power (nW)") != std::string::npos);
}

TEST_CASE("sweep table formats") {
  SweepPoint p;
  p.value = 20.6;
  p.gates = 100;
  p.trigger_slots = 10;
  p.slot_clicks = 5;
  p.total_clicks = 5;
  p.click_probability = 0.5;
  p.standard_error = std::sqrt(0.025);
  p.click_rate_hz = 5e6;
  const std::string csv = format_sweep({p}, SweepVariable::trigger_energy_fj, OutputFormat::csv);
  CHECK(csv.starts_with("trigger_energy_fj,gates,trigger_slots,slot_clicks,total_clicks,"));
  CHECK(csv.find("\n20.600000000000001,100,10,5,5,0.5,") != std::string::npos);
}
