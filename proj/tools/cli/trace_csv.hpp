#pragma once

#include <istream>
#include <optional>
#include <string>
#include <vector>

namespace proxybo::cli {

// One parsed trace file. Empty guidance cells become nullopt.
struct TraceTable {
  std::vector<std::string> proxy_names;
  struct Row {
    int iteration = 0;
    std::string encoding;
    double val = 0.0, test = 0.0, best_val = 0.0, best_test = 0.0, cost = 0.0;
    std::vector<std::optional<double>> g;  // surrogate, then proxies
    std::vector<std::optional<double>> weights;
  };
  std::vector<Row> rows;
};

// Splits one CSV line; double quotes protect commas.
std::vector<std::string> split_csv_line(const std::string& line);

// Throws ParseError naming the line and column.
TraceTable read_trace_csv(std::istream& in);

}  // namespace proxybo::cli
