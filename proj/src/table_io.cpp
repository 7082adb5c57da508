#include <cstdio>
#include <ostream>

#include "qwalk/experiments.hpp"

namespace qwalk {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(std::ostream& os, const ResultTable& table) {
  os << "t,theta,theta2,quantity,value,units\n";
  for (const auto& r : table.rows) {
    os << r.t << ',' << format_number(r.theta) << ','
       << (r.theta2 ? format_number(*r.theta2) : std::string()) << ',' << r.quantity << ','
       << format_number(r.value) << ',' << r.units << '\n';
  }
}

void write_json(std::ostream& os, const ResultTable& table) {
  nlohmann::json doc;
  doc["schema"] = kConfigSchemaVersion;
  doc["columns"] = {"t", "theta", "theta2", "quantity", "value", "units"};
  auto rows = nlohmann::json::array();
  for (const auto& r : table.rows) {
    rows.push_back({r.t, r.theta, r.theta2 ? nlohmann::json(*r.theta2) : nlohmann::json(nullptr),
                    r.quantity, r.value, r.units});
  }
  doc["rows"] = std::move(rows);
  os << doc.dump() << '\n';
}

void write_table(std::ostream& os, const ResultTable& table, Format format) {
  if (format == Format::Json) {
    write_json(os, table);
  } else {
    write_csv(os, table);
  }
}

}  // namespace qwalk
