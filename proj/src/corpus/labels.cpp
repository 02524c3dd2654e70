#include "vdo/labels.hpp"

namespace vdo {

std::string_view category_name(Category c) noexcept {
  switch (c) {
    case Category::Mitigation: return "Mitigation";
    case Category::ImpactMethod: return "Impact Method";
    case Category::LogicalImpact: return "Logical Impact";
    case Category::Location: return "Location";
    case Category::Scope: return "Scope";
  }
  return "?";
}

}  // namespace vdo
