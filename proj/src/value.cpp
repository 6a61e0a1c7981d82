#include "bss/value.hpp"

namespace bss {

std::strong_ordering operator<=>(const Value& a, const Value& b) {
  if (a.is_rational() != b.is_rational())
    return a.is_rational() ? std::strong_ordering::less : std::strong_ordering::greater;
  if (a.is_rational()) {
    if (a.rational() == b.rational()) return std::strong_ordering::equal;
    return enum_less(a.rational(), b.rational()) ? std::strong_ordering::less
                                                 : std::strong_ordering::greater;
  }
  return a.element().index <=> b.element().index;
}

}  // namespace bss
