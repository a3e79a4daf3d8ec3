#pragma once

#include <string>
#include <vector>

namespace laxglue {

struct check_item {
  std::string name;
  bool pass = false;
  std::string note;
};

struct check_list {
  std::vector<check_item> items;

  void add(const std::string& name, bool pass, const std::string& note = "") {
    items.push_back(check_item{name, pass, note});
  }
  void merge(const check_list& other) {
    items.insert(items.end(), other.items.begin(), other.items.end());
  }
  bool all_pass() const {
    for (const auto& it : items)
      if (!it.pass) return false;
    return true;
  }
  std::size_t fail_count() const {
    std::size_t n = 0;
    for (const auto& it : items)
      if (!it.pass) ++n;
    return n;
  }
};

}  // namespace laxglue
