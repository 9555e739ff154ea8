#pragma once

// CSV series: menus, allocations and profit traces. Reals use 17
// significant digits so files round-trip exactly.

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "screenopt/menu.hpp"
#include "screenopt/solver.hpp"

namespace screenopt::io {

std::string format_real(double v);

/// Header: y_1..y_N,price,is_null
std::string menu_csv(const Menu& menu, std::size_t product_dim);
/// Header: agent_index,x_1..x_M,item,y_1..y_N,price,u,profit_contrib
std::string allocation_csv(const ProblemInstance& instance, const Allocation& allocation);
/// Header: restart,iteration,profit,incumbent
std::string trace_csv(const std::vector<TracePoint>& trace);

/// Agent-indexed assignment read back from an allocation file.
struct AssignmentTable {
  std::vector<std::size_t> agent_index;
  std::vector<Vec> product;
  Vec price;
};

/// A menu file or an allocation file, told apart by the header.
using CheckInput = std::variant<Menu, AssignmentTable>;

/// Throws SchemaError naming the bad column or row.
Menu parse_menu_csv(const std::string& text, std::size_t product_dim);
CheckInput parse_check_csv(const std::string& text, std::size_t agent_dim, std::size_t product_dim);

/// Rebuilds an allocation (utilities, profits) from an assignment table.
Allocation allocation_from_table(const ProblemInstance& instance, const AssignmentTable& table);

std::string read_text(const std::filesystem::path& path);
/// Writes through a temporary file in the same directory, then renames.
void write_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace screenopt::io
