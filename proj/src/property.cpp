#include "mstcov/property.hpp"

#include "mstcov/error.hpp"

#include <algorithm>
#include <cctype>
#include <string>

namespace mstcov {

std::string_view to_string(PropertyType property) {
  switch (property) {
  case PropertyType::Vsym: return "Vsym";
  case PropertyType::Ssym: return "Ssym";
  case PropertyType::Tsym: return "Tsym";
  case PropertyType::VST: return "V|ST";
  case PropertyType::SVT: return "S|VT";
  case PropertyType::TVS: return "T|VS";
  case PropertyType::VS: return "V|S";
  case PropertyType::VT: return "V|T";
  case PropertyType::ST: return "S|T";
  }
  return "?";
}

std::string_view slug(PropertyType property) {
  switch (property) {
  case PropertyType::Vsym: return "Vsym";
  case PropertyType::Ssym: return "Ssym";
  case PropertyType::Tsym: return "Tsym";
  case PropertyType::VST: return "VST";
  case PropertyType::SVT: return "SVT";
  case PropertyType::TVS: return "TVS";
  case PropertyType::VS: return "VS";
  case PropertyType::VT: return "VT";
  case PropertyType::ST: return "ST";
  }
  return "?";
}

namespace {

std::string lowered(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

} // namespace

PropertyType parse_property(std::string_view text) {
  const std::string key = lowered(text);
  for (PropertyType property : kAllProperties) {
    if (key == lowered(to_string(property)) || key == lowered(slug(property))) {
      return property;
    }
  }
  throw ValidationError("unknown property '" + std::string(text) +
                        "' (expected one of Vsym, Ssym, Tsym, VST, SVT, TVS, VS, VT, ST)");
}

} // namespace mstcov
