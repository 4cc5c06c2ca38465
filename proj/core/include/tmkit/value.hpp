#pragma once

#include <string>
#include <variant>

namespace tmkit {

/// Attribute, parameter and property values: integers, booleans, strings.
using Value = std::variant<long long, bool, std::string>;

std::string value_to_string(const Value& v);

/// Natural string order: digit runs compare numerically, so "E2" < "E10".
/// Used everywhere a deterministic, human-sane element order is needed.
bool natural_less(std::string_view a, std::string_view b);

struct NaturalLess {
  bool operator()(std::string_view a, std::string_view b) const {
    return natural_less(a, b);
  }
};

}  // namespace tmkit
