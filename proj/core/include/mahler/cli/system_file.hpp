#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mahler/points/rational_point.hpp"
#include "mahler/systems/systems.hpp"

namespace mahler {

/// Header line every system file starts with.
inline constexpr std::string_view kSystemFileTag = "# mahler-system v1";

struct SystemDef {
  std::string name;
  MahlerSystem system;
  /// Initial values f(0) used by eval and the relation commands.
  std::optional<std::vector<BigRational>> f0;
  std::size_t line = 0;
};

struct PointDef {
  std::string name;
  RationalPoint point;
  std::size_t line = 0;
};

struct Settings {
  long prec = 128;
  long digits = 20;
  long order = 16;
  long k = 4;
  long k_max = 16;
  long degree = 1;
  long d_max = 2;
  std::string bound = "1000000";

  friend bool operator==(const Settings&, const Settings&) = default;
};

struct SystemFile {
  std::vector<SystemDef> systems;
  std::vector<PointDef> points;
  Settings settings;

  /// Throws DomainError naming the missing definition.
  const SystemDef& system(const std::string& name) const;
  const PointDef& point(const std::string& name) const;
};

/// Grammar (line based, '#' starts a comment line):
///   # mahler-system v1
///   [settings]            prec, digits, order, k, k_max, degree, d_max, bound
///   [system NAME]         vars = z1, z2   T = [[1,1],[1,0]]   A[i][j] = expr   f0 = 1, 0
///   [point NAME]          coords = 1/2, 1/3
/// Omitted A entries are zero. Throws ParseError with the offending line and
/// column for syntax errors, dimension mismatches and duplicate names.
SystemFile parse_system_file(std::string_view text);

/// Normalized text: header, settings, systems and points in file order,
/// every A entry written out. parse_system_file(print_system_file(f)) equals f.
std::string print_system_file(const SystemFile& f);

/// Structural equality (names, variables, T, A, f0, points, settings).
bool same_structure(const SystemFile& a, const SystemFile& b);

/// One [system NAME] section for the given system.
std::string print_system_section(const std::string& name, const MahlerSystem& sys,
                                 const std::optional<std::vector<BigRational>>& f0);

}  // namespace mahler
