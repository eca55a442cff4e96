#pragma once

#include <perron/geometry.hpp>

#include <string>
#include <vector>

namespace perron::cli {

struct DiagramOptions {
  Representation rep = Representation::positive;
  std::size_t depth = 1;
  std::size_t depth_cap = 4;
  /// Only the widest children of every cylinder are drawn.
  std::size_t max_children = 8;
};

struct DiagramNode {
  PrefixBase base;
  CylinderGeometry geometry;
  /// Left to right.
  std::vector<DiagramNode> children;
  /// Region covered by the children that were not drawn.
  std::optional<std::pair<Rational, Rational>> omitted;
  Integer first_omitted_digit;
  bool larger_digits_to_the_right = false;
};

/// Throws OutOfDomain when depth exceeds the cap.
DiagramNode build_diagram(const PrefixBase& base, const DiagramOptions& options);

std::string render_text(const DiagramNode& root, const DiagramOptions& options);
std::string render_svg(const DiagramNode& root, const DiagramOptions& options);

}  // namespace perron::cli
