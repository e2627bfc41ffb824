#include "blindsim/report.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace blindsim {

namespace {

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

struct Field {
  std::string_view name;
  std::string machine;  // empty string = undefined
  std::string text;
};

std::vector<Field> stats_fields(const RunStats& s) {
  auto count = [](std::uint64_t v) { return std::to_string(v); };
  auto ratio = [](const std::optional<double>& v) {
    return v ? format_double(*v) : std::string{};
  };
  auto ratio_text = [](const std::optional<double>& v) {
    return v ? format_double(*v) : std::string("NA");
  };
  return {
      {"gates_total", count(s.gates_total), count(s.gates_total)},
      {"clicks", count(s.clicks), count(s.clicks)},
      {"double_clicks", count(s.double_clicks), count(s.double_clicks)},
      {"sifted_bits", count(s.sifted_bits), count(s.sifted_bits)},
      {"errors", count(s.errors), count(s.errors)},
      {"qber", ratio(s.qber), ratio_text(s.qber)},
      {"eve_known_fraction", ratio(s.eve_known_fraction), ratio_text(s.eve_known_fraction)},
      {"raw_click_rate_hz", format_double(s.raw_click_rate_hz), format_double(s.raw_click_rate_hz)},
      {"alarms", count(s.alarms), count(s.alarms)},
  };
}

std::string_view basis_name(Basis b) { return b == Basis::Z ? "Z" : "X"; }

}  // namespace

OutputFormat parse_output_format(std::string_view name) {
  if (name == "text") return OutputFormat::text;
  if (name == "csv") return OutputFormat::csv;
  if (name == "jsonl") return OutputFormat::jsonl;
  throw std::invalid_argument("unknown output format '" + std::string(name) +
                              "' (expected text|csv|jsonl)");
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string_view stats_csv_header() {
  return "gates_total,clicks,double_clicks,sifted_bits,errors,qber,eve_known_fraction,"
         "raw_click_rate_hz,alarms";
}

std::string format_stats(const RunStats& stats, OutputFormat format) {
  const auto fields = stats_fields(stats);
  std::ostringstream out;
  switch (format) {
    case OutputFormat::text:
      for (const auto& f : fields) {
        out << f.name << std::string(20 - f.name.size(), ' ') << f.text << '\n';
      }
      out << "forged_pulses" << std::string(7, ' ') << stats.forged_pulses << '\n';
      out << "wrong_basis_clicks" << std::string(2, ' ') << stats.wrong_basis_clicks << '\n';
      if (stats.first_alarm_gate) {
        out << "first_alarm_gate" << std::string(4, ' ') << *stats.first_alarm_gate << '\n';
      }
      if (stats.watchdog_blinded_gates > 0) {
        out << "watchdog_blinded" << std::string(4, ' ') << stats.watchdog_blinded_gates << '\n';
      }
      break;
    case OutputFormat::csv:
      out << stats_csv_header() << '\n';
      for (std::size_t i = 0; i < fields.size(); ++i) {
        out << (i ? "," : "") << fields[i].machine;
      }
      out << '\n';
      break;
    case OutputFormat::jsonl:
      out << '{';
      for (std::size_t i = 0; i < fields.size(); ++i) {
        out << (i ? "," : "") << '"' << fields[i].name << "\":"
            << (fields[i].machine.empty() ? "null" : fields[i].machine);
      }
      out << "}\n";
      break;
  }
  return out.str();
}

std::string_view event_log_header() {
  return "gate_index,alice_basis,alice_bit,alice_mean_photons,eve_basis,eve_bit,bob_basis,"
         "click0,click1,sifted,error";
}

std::string format_event(const GateRecord& r) {
  std::string line;
  line.reserve(64);
  line += std::to_string(r.gate_index);
  line += ',';
  line += basis_name(r.alice.basis);
  line += ',';
  line += std::to_string(to_int(r.alice.bit));
  line += ',';
  line += format_double(r.alice.mean_photons);
  line += ',';
  if (r.eve_basis) line += basis_name(*r.eve_basis);
  line += ',';
  if (r.eve_bit) line += std::to_string(to_int(*r.eve_bit));
  line += ',';
  line += basis_name(r.bob_basis);
  for (const bool flag : {r.click0, r.click1, r.sifted, r.error}) {
    line += flag ? ",1" : ",0";
  }
  return line;
}

std::string format_budget(const std::array<BudgetRow, 3>& rows, OutputFormat format) {
  std::ostringstream out;
  auto decimals = [](const BudgetRow& row) {
    return row.stage == BudgetStage::at_subcarriers_after_filtering ? 1 : 0;
  };
  switch (format) {
    case OutputFormat::text: {
      char line[160];
      std::snprintf(line, sizeof line, "%-30s %20s %15s %15s\n", "Eve's faked-state power in",
                    "Blinding power (nW)", "E_always (fJ)", "E_never (fJ)");
      out << line;
      for (const auto& row : rows) {
        const int d = decimals(row);
        std::snprintf(line, sizeof line, "%-30s %20s %15s %15s\n",
                      std::string(to_string(row.stage)).c_str(),
                      fixed(row.blinding_power.in_nanowatts(), d).c_str(),
                      fixed(row.e_always.in_femtojoules(), d).c_str(),
                      fixed(row.e_never.in_femtojoules(), d).c_str());
        out << line;
      }
      break;
    }
    case OutputFormat::csv:
      out << "stage,blinding_power_nW,e_always_fJ,e_never_fJ\n";
      for (const auto& row : rows) {
        const int d = decimals(row);
        out << to_string(row.stage) << ',' << fixed(row.blinding_power.in_nanowatts(), d) << ','
            << fixed(row.e_always.in_femtojoules(), d) << ','
            << fixed(row.e_never.in_femtojoules(), d) << '\n';
      }
      break;
    case OutputFormat::jsonl:
      for (const auto& row : rows) {
        out << "{\"stage\":\"" << to_string(row.stage)
            << "\",\"blinding_power_nW\":" << format_double(row.blinding_power.in_nanowatts())
            << ",\"e_always_fJ\":" << format_double(row.e_always.in_femtojoules())
            << ",\"e_never_fJ\":" << format_double(row.e_never.in_femtojoules()) << "}\n";
      }
      break;
  }
  return out.str();
}

std::string format_sweep(const std::vector<SweepPoint>& points, SweepVariable variable,
                         OutputFormat format) {
  std::ostringstream out;
  const std::string_view var = to_string(variable);
  switch (format) {
    case OutputFormat::text: {
      char line[200];
      std::snprintf(line, sizeof line, "%18s %12s %12s %14s %12s %14s\n",
                    std::string(var).c_str(), "slots", "slot_clicks", "click_prob", "std_err",
                    "click_rate_hz");
      out << line;
      for (const auto& p : points) {
        std::snprintf(line, sizeof line, "%18.4f %12llu %12llu %14.6f %12.6f %14.3f\n", p.value,
                      static_cast<unsigned long long>(p.trigger_slots),
                      static_cast<unsigned long long>(p.slot_clicks), p.click_probability,
                      p.standard_error, p.click_rate_hz);
        out << line;
      }
      break;
    }
    case OutputFormat::csv:
      out << var << ",gates,trigger_slots,slot_clicks,total_clicks,click_probability,"
                    "standard_error,click_rate_hz\n";
      for (const auto& p : points) {
        out << format_double(p.value) << ',' << p.gates << ',' << p.trigger_slots << ','
            << p.slot_clicks << ',' << p.total_clicks << ',' << format_double(p.click_probability)
            << ',' << format_double(p.standard_error) << ',' << format_double(p.click_rate_hz)
            << '\n';
      }
      break;
    case OutputFormat::jsonl:
      for (const auto& p : points) {
        out << "{\"" << var << "\":" << format_double(p.value) << ",\"gates\":" << p.gates
            << ",\"trigger_slots\":" << p.trigger_slots << ",\"slot_clicks\":" << p.slot_clicks
            << ",\"total_clicks\":" << p.total_clicks
            << ",\"click_probability\":" << format_double(p.click_probability)
            << ",\"standard_error\":" << format_double(p.standard_error)
            << ",\"click_rate_hz\":" << format_double(p.click_rate_hz) << "}\n";
      }
      break;
  }
  return out.str();
}

}  // namespace blindsim
