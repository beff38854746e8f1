#pragma once

#include <array>
#include <string_view>

namespace mstcov {

/// The nine covariance properties: three symmetries and six separabilities.
enum class PropertyType { Vsym, Ssym, Tsym, VST, SVT, TVS, VS, VT, ST };

inline constexpr std::array<PropertyType, 9> kAllProperties{
    PropertyType::Vsym, PropertyType::Ssym, PropertyType::Tsym,
    PropertyType::VST,  PropertyType::SVT,  PropertyType::TVS,
    PropertyType::VS,   PropertyType::VT,   PropertyType::ST};

inline constexpr std::array<PropertyType, 3> kSymmetryProperties{
    PropertyType::Vsym, PropertyType::Ssym, PropertyType::Tsym};

inline constexpr std::array<PropertyType, 6> kSeparabilityProperties{
    PropertyType::VST, PropertyType::SVT, PropertyType::TVS,
    PropertyType::VS,  PropertyType::VT,  PropertyType::ST};

/// Canonical display name: "Vsym", "Ssym", "Tsym", "V|ST", "S|VT", "T|VS",
/// "V|S", "V|T", "S|T".
std::string_view to_string(PropertyType property);

/// Identifier safe for file names and CSV columns ("Vsym", "VST", ...).
std::string_view slug(PropertyType property);

/// Accepts either the display name or the slug, case-insensitively.
/// Throws ValidationError on anything else.
PropertyType parse_property(std::string_view text);

constexpr bool is_symmetry(PropertyType property) {
  return property == PropertyType::Vsym || property == PropertyType::Ssym ||
         property == PropertyType::Tsym;
}

/// V|ST, S|VT and T|VS: the joint covariance is a (possibly permuted)
/// Kronecker product of two smaller matrices.
constexpr bool is_kronecker(PropertyType property) {
  return property == PropertyType::VST || property == PropertyType::SVT ||
         property == PropertyType::TVS;
}

} // namespace mstcov
