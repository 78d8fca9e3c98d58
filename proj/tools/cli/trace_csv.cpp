#include "trace_csv.hpp"

#include "proxybo/error.hpp"
#include "proxybo/table.hpp"

namespace proxybo::cli {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (char c : line) {
    if (c == '"') {
      quoted = !quoted;
    } else if (c == ',' && !quoted) {
      out.emplace_back();
    } else if (c != '\r') {
      out.back() += c;
    }
  }
  return out;
}

namespace {

constexpr std::size_t kFixedColumns = 7;

double number(const std::string& cell, std::size_t line, const std::string& column) {
  const auto v = parse_double(cell);
  if (!v) throw ParseError(line, column, "expected a number, got '" + cell + "'");
  return *v;
}

std::optional<double> optional_number(const std::string& cell, std::size_t line,
                                      const std::string& column) {
  if (cell.empty()) return std::nullopt;
  return number(cell, line, column);
}

}  // namespace

TraceTable read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(1, "header", "empty trace file");
  const auto header = split_csv_line(line);
  static const char* fixed[] = {"iter", "encoding", "val", "test", "best_val", "best_test",
                                "cost", "G_M", "I_M"};
  if (header.size() < 9 || (header.size() - 9) % 2 != 0) {
    throw ParseError(1, "header", "unexpected column count");
  }
  for (std::size_t i = 0; i < 9; ++i) {
    if (header[i] != fixed[i]) throw ParseError(1, header[i], std::string("expected '") + fixed[i] + "'");
  }
  TraceTable t;
  for (std::size_t i = 9; i < header.size(); i += 2) {
    if (!header[i].starts_with("G_") || header[i + 1] != "I_" + header[i].substr(2)) {
      throw ParseError(1, header[i], "expected a G_<name>,I_<name> pair");
    }
    t.proxy_names.push_back(header[i].substr(2));
  }
  const std::size_t components = t.proxy_names.size() + 1;
  std::size_t n = 1;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size()) throw ParseError(n, "row", "wrong number of columns");
    TraceTable::Row r;
    r.iteration = static_cast<int>(number(cells[0], n, "iter"));
    r.encoding = cells[1];
    r.val = number(cells[2], n, "val");
    r.test = number(cells[3], n, "test");
    r.best_val = number(cells[4], n, "best_val");
    r.best_test = number(cells[5], n, "best_test");
    r.cost = number(cells[6], n, "cost");
    for (std::size_t c = 0; c < components; ++c) {
      const std::size_t g = kFixedColumns + 2 * c;
      r.g.push_back(optional_number(cells[g], n, header[g]));
      r.weights.push_back(optional_number(cells[g + 1], n, header[g + 1]));
    }
    t.rows.push_back(std::move(r));
  }
  return t;
}

}  // namespace proxybo::cli
