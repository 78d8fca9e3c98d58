#include "proxybo/table.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "proxybo/error.hpp"

namespace proxybo {

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

std::optional<double> parse_double(std::string_view text) {
  double v = 0.0;
  const char* b = text.data();
  const char* e = b + text.size();
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || p != e || b == e) return std::nullopt;
  return v;
}

BenchmarkTable::BenchmarkTable(SearchSpaceSpec spec, TableMeta meta,
                               std::vector<std::string> proxy_names)
    : spec_(std::move(spec)), meta_(std::move(meta)), proxy_names_(std::move(proxy_names)) {
  spec_.validate();
  if (meta_.name.empty() || meta_.name.find_first_of(" \t;=") != std::string::npos) {
    throw InvalidArgument("table name must be non-empty without spaces, ';' or '='");
  }
  for (const auto& n : proxy_names_) {
    if (n.empty() || n.find_first_of(" \t;=") != std::string::npos) {
      throw InvalidArgument("proxy name '" + n + "' must be non-empty without spaces, ';' or '='");
    }
  }
}

void BenchmarkTable::add(TableRecord record) {
  if (!record.x.valid_for(spec_)) {
    throw InvalidArgument("encoding " + record.x.to_string() + " is out of range for the space");
  }
  if (!std::isfinite(record.val)) throw InvalidArgument("val is not finite");
  if (!std::isfinite(record.test)) throw InvalidArgument("test is not finite");
  if (!std::isfinite(record.cost)) throw InvalidArgument("cost is not finite");
  record.proxies.resize(std::max(record.proxies.size(), proxy_names_.size()));
  if (record.proxies.size() != proxy_names_.size()) {
    throw InvalidArgument("record has more proxy columns than the table");
  }
  for (const auto& p : record.proxies) {
    if (p && std::isnan(*p)) throw InvalidArgument("proxy score is NaN");
  }
  if (index_.count(record.x)) {
    throw InvalidArgument("duplicate encoding " + record.x.to_string());
  }
  index_.emplace(record.x, records_.size());
  records_.push_back(std::move(record));
}

std::optional<std::size_t> BenchmarkTable::proxy_column(const std::string& name) const {
  auto it = std::find(proxy_names_.begin(), proxy_names_.end(), name);
  if (it == proxy_names_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - proxy_names_.begin());
}

bool BenchmarkTable::exhaustive() const {
  return static_cast<double>(records_.size()) == spec_.size();
}

const TableRecord* BenchmarkTable::find(const ArchEncoding& x) const {
  auto it = index_.find(x);
  return it == index_.end() ? nullptr : &records_[it->second];
}

const TableRecord& BenchmarkTable::at(const ArchEncoding& x) const {
  const TableRecord* r = find(x);
  if (!r) throw LookupError("encoding " + x.to_string() + " not in table '" + meta_.name + "'");
  return *r;
}

double BenchmarkTable::best_objective_val() const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& r : records_) best = std::min(best, objective_val(r));
  return best;
}

double BenchmarkTable::best_objective_test() const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& r : records_) best = std::min(best, objective_test(r));
  return best;
}

void BenchmarkTable::save(std::ostream& out) const {
  out << "#space edges=" << spec_.edge_count << " ops=" << spec_.ops_per_edge << '\n';
  out << "#meta name=" << meta_.name << " minimize=" << (meta_.minimize ? 1 : 0)
      << " optimum_test=" << format_double(meta_.optimum_test) << '\n';
  for (const auto& r : records_) {
    out << r.x.to_string() << ';' << format_double(r.val) << ';' << format_double(r.test)
        << ';' << format_double(r.cost);
    for (std::size_t p = 0; p < proxy_names_.size(); ++p) {
      if (r.proxies[p]) out << ";proxy:" << proxy_names_[p] << '=' << format_double(*r.proxies[p]);
    }
    out << '\n';
  }
}

void BenchmarkTable::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  save(out);
  if (!out) throw Error("failed writing " + path.string());
}

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

// Parses "key=value" tokens separated by spaces.
std::vector<std::pair<std::string, std::string>> key_values(std::string_view s,
                                                            std::size_t line) {
  std::vector<std::pair<std::string, std::string>> out;
  for (auto tok : split(s, ' ')) {
    if (tok.empty()) continue;
    const auto eq = tok.find('=');
    if (eq == std::string_view::npos) throw ParseError(line, std::string(tok), "expected key=value");
    out.emplace_back(std::string(tok.substr(0, eq)), std::string(tok.substr(eq + 1)));
  }
  return out;
}

int parse_int_field(const std::string& text, std::size_t line, const std::string& field) {
  int v = 0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || p != text.data() + text.size() || text.empty()) {
    throw ParseError(line, field, "expected an integer, got '" + text + "'");
  }
  return v;
}

double parse_double_field(std::string_view text, std::size_t line, const std::string& field,
                          bool finite) {
  auto v = parse_double(text);
  if (!v) throw ParseError(line, field, "expected a number, got '" + std::string(text) + "'");
  if (finite && !std::isfinite(*v)) throw ParseError(line, field, "value is not finite");
  if (std::isnan(*v)) throw ParseError(line, field, "value is NaN");
  return *v;
}

}  // namespace

BenchmarkTable BenchmarkTable::load(std::istream& in) {
  std::optional<SearchSpaceSpec> spec;
  std::optional<TableMeta> meta;
  std::vector<std::string> proxy_names;
  struct Row {
    std::size_t line;
    TableRecord rec;
    std::vector<std::pair<std::string, double>> named;
  };
  std::vector<Row> rows;

  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view s(raw);
    if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
    if (s.empty()) continue;
    if (s.starts_with("#space")) {
      SearchSpaceSpec sp;
      bool has_e = false, has_o = false;
      for (const auto& [k, v] : key_values(s.substr(6), line)) {
        if (k == "edges") {
          sp.edge_count = parse_int_field(v, line, k);
          has_e = true;
        } else if (k == "ops") {
          sp.ops_per_edge = parse_int_field(v, line, k);
          has_o = true;
        } else {
          throw ParseError(line, k, "unknown #space key");
        }
      }
      if (!has_e || !has_o) throw ParseError(line, "#space", "needs edges= and ops=");
      try {
        sp.validate();
      } catch (const InvalidSpace& e) {
        throw ParseError(line, "#space", e.what());
      }
      spec = sp;
      continue;
    }
    if (s.starts_with("#meta")) {
      TableMeta m;
      for (const auto& [k, v] : key_values(s.substr(5), line)) {
        if (k == "name") {
          m.name = v;
        } else if (k == "minimize") {
          if (v != "0" && v != "1") throw ParseError(line, k, "expected 0 or 1");
          m.minimize = v == "1";
        } else if (k == "optimum_test") {
          m.optimum_test = parse_double_field(v, line, k, true);
        } else {
          throw ParseError(line, k, "unknown #meta key");
        }
      }
      meta = m;
      continue;
    }
    if (s.front() == '#') continue;
    if (!spec) throw ParseError(line, "#space", "record before #space header");

    auto fields = split(s, ';');
    if (fields.size() < 4) throw ParseError(line, "record", "expected encoding;val;test;cost");
    Row row{line, {}, {}};
    try {
      row.rec.x = ArchEncoding::parse(fields[0]);
    } catch (const InvalidArgument& e) {
      throw ParseError(line, "encoding", e.what());
    }
    if (!row.rec.x.valid_for(*spec)) {
      throw ParseError(line, "encoding", "'" + std::string(fields[0]) + "' is out of range");
    }
    row.rec.val = parse_double_field(fields[1], line, "val", true);
    row.rec.test = parse_double_field(fields[2], line, "test", true);
    row.rec.cost = parse_double_field(fields[3], line, "cost", true);
    for (std::size_t f = 4; f < fields.size(); ++f) {
      auto tok = fields[f];
      if (!tok.starts_with("proxy:")) throw ParseError(line, std::string(tok), "expected proxy:<name>=<value>");
      tok.remove_prefix(6);
      const auto eq = tok.find('=');
      if (eq == std::string_view::npos || eq == 0) throw ParseError(line, std::string(tok), "expected proxy:<name>=<value>");
      std::string name(tok.substr(0, eq));
      const double v = parse_double_field(tok.substr(eq + 1), line, "proxy:" + name, false);
      for (const auto& [n, _] : row.named) {
        if (n == name) throw ParseError(line, "proxy:" + name, "repeated proxy column");
      }
      if (std::find(proxy_names.begin(), proxy_names.end(), name) == proxy_names.end()) {
        proxy_names.push_back(name);
      }
      row.named.emplace_back(std::move(name), v);
    }
    rows.push_back(std::move(row));
  }
  if (!spec) throw ParseError(line, "#space", "missing #space header");
  if (!meta) throw ParseError(line, "#meta", "missing #meta header");

  BenchmarkTable table(*spec, *meta, proxy_names);
  for (auto& row : rows) {
    row.rec.proxies.assign(proxy_names.size(), std::nullopt);
    for (auto& [name, v] : row.named) row.rec.proxies[*table.proxy_column(name)] = v;
    if (table.find(row.rec.x)) {
      throw ParseError(row.line, "encoding", "duplicate encoding " + row.rec.x.to_string());
    }
    table.add(std::move(row.rec));
  }
  return table;
}

BenchmarkTable BenchmarkTable::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open benchmark table " + path.string());
  return load(in);
}

bool BenchmarkTable::operator==(const BenchmarkTable& o) const {
  if (!(spec_ == o.spec_) || meta_.name != o.meta_.name || meta_.minimize != o.meta_.minimize ||
      meta_.optimum_test != o.meta_.optimum_test || proxy_names_ != o.proxy_names_ ||
      records_.size() != o.records_.size()) {
    return false;
  }
  for (std::size_t i = 0; i < records_.size(); ++i) {
    const auto& a = records_[i];
    const auto& b = o.records_[i];
    if (a.x != b.x || a.val != b.val || a.test != b.test || a.cost != b.cost ||
        a.proxies != b.proxies) {
      return false;
    }
  }
  return true;
}

}  // namespace proxybo
