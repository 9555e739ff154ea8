#include "screenopt/io/csv_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include "screenopt/io/instance_io.hpp"

namespace screenopt::io {
namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

double cell_real(const std::string& s, const std::string& column, std::size_t row) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw SchemaError(column + " (row " + std::to_string(row) + ")", "expected a number, got '" + s + "'");
}

std::size_t cell_index(const std::string& s, const std::string& column, std::size_t row) {
  const double v = cell_real(s, column, row);
  if (v < 0 || v != static_cast<double>(static_cast<std::size_t>(v)))
    throw SchemaError(column + " (row " + std::to_string(row) + ")", "expected a nonnegative integer");
  return static_cast<std::size_t>(v);
}

std::vector<std::string> numbered(const char* prefix, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 1; i <= n; ++i) out.push_back(std::string(prefix) + std::to_string(i));
  return out;
}

void expect_header(const std::vector<std::string>& got, const std::vector<std::string>& want) {
  for (std::size_t c = 0; c < want.size(); ++c) {
    if (c >= got.size()) throw SchemaError(want[c], "missing column");
    if (got[c] != want[c]) throw SchemaError(got[c], "unexpected column, expected '" + want[c] + "'");
  }
  if (got.size() > want.size()) throw SchemaError(got[want.size()], "unexpected column");
}

std::vector<std::string> menu_header(std::size_t n) {
  auto h = numbered("y_", n);
  h.push_back("price");
  h.push_back("is_null");
  return h;
}

std::vector<std::string> allocation_header(std::size_t m, std::size_t n) {
  std::vector<std::string> h{"agent_index"};
  for (auto& s : numbered("x_", m)) h.push_back(s);
  h.push_back("item");
  for (auto& s : numbered("y_", n)) h.push_back(s);
  for (const char* s : {"price", "u", "profit_contrib"}) h.push_back(s);
  return h;
}

std::string join_row(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += cells[i];
  }
  out += '\n';
  return out;
}

}  // namespace

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string menu_csv(const Menu& menu, std::size_t product_dim) {
  std::string out = join_row(menu_header(product_dim));
  for (const auto& item : menu.items) {
    std::vector<std::string> row;
    for (double y : item.product) row.push_back(format_real(y));
    row.push_back(format_real(item.price));
    row.push_back(item.is_null ? "1" : "0");
    out += join_row(row);
  }
  return out;
}

std::string allocation_csv(const ProblemInstance& instance, const Allocation& allocation) {
  std::string out = join_row(allocation_header(instance.agent_dim(), instance.product_dim()));
  for (std::size_t i = 0; i < allocation.size(); ++i) {
    const auto& c = allocation[i];
    std::vector<std::string> row{std::to_string(i)};
    for (double x : instance.agents().point(i)) row.push_back(format_real(x));
    row.push_back(std::to_string(c.item));
    for (double y : c.product) row.push_back(format_real(y));
    row.push_back(format_real(c.price));
    row.push_back(format_real(c.utility));
    row.push_back(format_real(instance.agents().weight(i) * c.profit));
    out += join_row(row);
  }
  return out;
}

std::string trace_csv(const std::vector<TracePoint>& trace) {
  std::string out = "restart,iteration,profit,incumbent\n";
  for (const auto& t : trace)
    out += join_row({std::to_string(t.restart), std::to_string(t.iteration), format_real(t.profit),
                     format_real(t.incumbent)});
  return out;
}

Menu parse_menu_csv(const std::string& text, std::size_t product_dim) {
  const auto lines = lines_of(text);
  if (lines.empty()) throw SchemaError("<header>", "empty menu file");
  const auto header = menu_header(product_dim);
  expect_header(split(lines[0]), header);
  Menu menu;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto cells = split(lines[r]);
    if (cells.size() != header.size())
      throw SchemaError("row " + std::to_string(r), "expected " + std::to_string(header.size()) + " cells");
    MenuItem item;
    for (std::size_t d = 0; d < product_dim; ++d) item.product.push_back(cell_real(cells[d], header[d], r));
    item.price = cell_real(cells[product_dim], "price", r);
    const auto& flag = cells[product_dim + 1];
    if (flag != "0" && flag != "1") throw SchemaError("is_null (row " + std::to_string(r) + ")", "expected 0 or 1");
    item.is_null = flag == "1";
    menu.items.push_back(std::move(item));
  }
  return menu;
}

CheckInput parse_check_csv(const std::string& text, std::size_t agent_dim, std::size_t product_dim) {
  const auto lines = lines_of(text);
  if (lines.empty()) throw SchemaError("<header>", "empty file");
  const auto first = split(lines[0]);
  if (first.empty() || first[0] != "agent_index") return parse_menu_csv(text, product_dim);

  const auto header = allocation_header(agent_dim, product_dim);
  expect_header(first, header);
  AssignmentTable table;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto cells = split(lines[r]);
    if (cells.size() != header.size())
      throw SchemaError("row " + std::to_string(r), "expected " + std::to_string(header.size()) + " cells");
    table.agent_index.push_back(cell_index(cells[0], "agent_index", r));
    const std::size_t y0 = 2 + agent_dim;
    Vec y;
    for (std::size_t d = 0; d < product_dim; ++d) y.push_back(cell_real(cells[y0 + d], header[y0 + d], r));
    table.product.push_back(std::move(y));
    table.price.push_back(cell_real(cells[y0 + product_dim], "price", r));
  }
  return table;
}

Allocation allocation_from_table(const ProblemInstance& instance, const AssignmentTable& table) {
  const std::size_t n = instance.agent_count();
  if (table.agent_index.size() != n)
    throw SchemaError("agent_index", "expected one row per agent (" + std::to_string(n) + ")");
  Allocation a;
  a.choices.resize(n);
  std::vector<bool> seen(n, false);
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t i = table.agent_index[r];
    if (i >= n || seen[i]) throw SchemaError("agent_index (row " + std::to_string(r + 1) + ")", "out of range or repeated");
    seen[i] = true;
    auto& c = a.choices[i];
    const ConstVec x = instance.agents().point(i);
    c.product = table.product[r];
    c.price = table.price[r];
    c.utility = eval_g(instance, x, c.product, c.price);
    c.profit = eval_profit(instance, x, c.product, c.price);
    c.item = r;
  }
  return a;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("<file>", "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw std::runtime_error("cannot rename " + tmp.string() + ": " + ec.message());
}

}  // namespace screenopt::io
