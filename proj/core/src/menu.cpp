#include "screenopt/menu.hpp"

#include <cmath>
#include <string>

namespace screenopt {

bool same_product(ConstVec a, ConstVec b, double tol) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i] - b[i]) > tol) return false;
  return true;
}

Menu Menu::null_only(const ProblemInstance& instance) {
  return Menu{{MenuItem{instance.outside().y_null, instance.outside().z_null, true}}};
}

Menu Menu::with_items(const ProblemInstance& instance, std::vector<MenuItem> offers) {
  Menu menu = null_only(instance);
  for (auto& item : offers) {
    item.is_null = false;
    menu.items.push_back(std::move(item));
  }
  return menu;
}

std::size_t Menu::null_index() const {
  for (std::size_t j = 0; j < items.size(); ++j)
    if (items[j].is_null) return j;
  throw InvalidInstance("menu has no null item");
}

void validate_menu(const ProblemInstance& instance, const Menu& menu) {
  if (menu.items.empty()) throw InvalidInstance("menu is empty");
  std::size_t nulls = 0;
  const auto& outside = instance.outside();
  for (std::size_t j = 0; j < menu.items.size(); ++j) {
    const auto& item = menu.items[j];
    const std::string tag = "menu item " + std::to_string(j);
    if (item.product.size() != instance.product_dim()) throw InvalidInstance(tag + " has wrong product length");
    if (!instance.product_box().contains(item.product, kDomainTol))
      throw InvalidInstance(tag + " product lies outside product_box");
    if (!std::isfinite(item.price) || item.price < instance.prices().z_lower - kDomainTol ||
        item.price > instance.price_cap() + kDomainTol)
      throw InvalidInstance(tag + " price lies outside [z_lower, cap]");
    if (item.is_null) {
      ++nulls;
      if (!same_product(item.product, outside.y_null) || std::abs(item.price - outside.z_null) > kProductEqualTol)
        throw InvalidInstance(tag + " is flagged null but differs from the outside option");
    }
    for (std::size_t k = 0; k < j; ++k)
      if (same_product(item.product, menu.items[k].product) &&
          std::abs(item.price - menu.items[k].price) <= kProductEqualTol)
        throw InvalidInstance(tag + " duplicates item " + std::to_string(k));
  }
  if (nulls != 1) throw InvalidInstance("menu must contain exactly one null item, found " + std::to_string(nulls));
}

}  // namespace screenopt
