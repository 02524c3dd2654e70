#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace vdo {

enum class Category : std::uint8_t { Mitigation, ImpactMethod, LogicalImpact, Location, Scope };

/// The 19 VDO characterizations. Enumerator values are the ontology table
/// order and double as the global tie-break priority (lower wins).
enum class Label : std::uint8_t {
  Aslr,
  MultiFactorAuthentication,
  Sandboxed,
  Hpkp,
  Hsts,
  PhysicalSecurity,
  ContextEscape,
  TrustFailure,
  ManInTheMiddle,
  Write,
  Read,
  ServiceInterrupt,
  IndirectDisclosure,
  PrivilegeEscalation,
  Memory,
  FileSystem,
  NetworkTraffic,
  Limited,
  Unlimited,
};

inline constexpr std::size_t kNumLabels = 19;

struct LabelInfo {
  Label label;
  std::string_view id;       // snake_case machine key
  std::string_view display;  // ontology display name
  Category category;
};

inline constexpr std::array<LabelInfo, kNumLabels> kLabelTable{{
    {Label::Aslr, "aslr", "ASLR", Category::Mitigation},
    {Label::MultiFactorAuthentication, "multi_factor_authentication", "Multi-Factor Authentication",
     Category::Mitigation},
    {Label::Sandboxed, "sandboxed", "Sandboxed", Category::Mitigation},
    {Label::Hpkp, "hpkp", "HPKP", Category::Mitigation},
    {Label::Hsts, "hsts", "HSTS", Category::Mitigation},
    {Label::PhysicalSecurity, "physical_security", "Physical Security", Category::Mitigation},
    {Label::ContextEscape, "context_escape", "Context Escape", Category::ImpactMethod},
    {Label::TrustFailure, "trust_failure", "Trust Failure", Category::ImpactMethod},
    {Label::ManInTheMiddle, "man_in_the_middle", "Man-in-the-Middle", Category::ImpactMethod},
    {Label::Write, "write", "Write", Category::LogicalImpact},
    {Label::Read, "read", "Read", Category::LogicalImpact},
    {Label::ServiceInterrupt, "service_interrupt", "Service Interrupt", Category::LogicalImpact},
    {Label::IndirectDisclosure, "indirect_disclosure", "Indirect Disclosure", Category::LogicalImpact},
    {Label::PrivilegeEscalation, "privilege_escalation", "Privilege Escalation",
     Category::LogicalImpact},
    {Label::Memory, "memory", "Memory", Category::Location},
    {Label::FileSystem, "file_system", "File System", Category::Location},
    {Label::NetworkTraffic, "network_traffic", "Network Traffic", Category::Location},
    {Label::Limited, "limited", "Limited", Category::Scope},
    {Label::Unlimited, "unlimited", "Unlimited", Category::Scope},
}};

constexpr std::size_t index_of(Label l) noexcept { return static_cast<std::size_t>(l); }
constexpr const LabelInfo& info(Label l) noexcept { return kLabelTable[index_of(l)]; }
constexpr std::string_view label_id(Label l) noexcept { return info(l).id; }
constexpr std::string_view display_name(Label l) noexcept { return info(l).display; }
constexpr Category category_of(Label l) noexcept { return info(l).category; }

constexpr std::optional<Label> label_from_index(std::size_t i) noexcept {
  if (i >= kNumLabels) return std::nullopt;
  return static_cast<Label>(i);
}

/// Parses a canonical snake_case id; anything else is rejected.
constexpr std::optional<Label> parse_label(std::string_view id) noexcept {
  for (const auto& e : kLabelTable) {
    if (e.id == id) return e.label;
  }
  return std::nullopt;
}

std::string_view category_name(Category c) noexcept;

}  // namespace vdo
