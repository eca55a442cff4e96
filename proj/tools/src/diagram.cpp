#include "perron_cli/diagram.hpp"

#include <perron/alternating.hpp>
#include <perron/errors.hpp>
#include <perron/positive.hpp>

#include <cstdio>
#include <sstream>

namespace perron::cli {

namespace {

CylinderGeometry geometry_of(Representation rep, const PrefixBase& base) {
  return rep == Representation::positive ? p_cylinder(base) : pm_cylinder(base).geometry;
}

std::string interval(Representation rep, const Rational& lo, const Rational& hi) {
  const char* close = rep == Representation::positive ? "]" : ")";
  return "(" + to_string(lo) + ", " + to_string(hi) + close;
}

void build(DiagramNode& node, Representation rep, std::size_t levels, std::size_t max_children) {
  if (levels == 0) return;
  // Larger digits move right only under odd-rank P^- parents.
  node.larger_digits_to_the_right = rep == Representation::alternating && node.base.rank() % 2 == 1;
  const Integer first = node.base.min_next_digit();
  std::vector<DiagramNode> kids;
  for (std::size_t i = 0; i < max_children; ++i) {
    PrefixBase base = node.base.extended(first + static_cast<unsigned long>(i));
    CylinderGeometry g = geometry_of(rep, base);
    DiagramNode child{std::move(base), std::move(g), {}, std::nullopt, Integer(0), false};
    build(child, rep, levels - 1, max_children);
    kids.push_back(std::move(child));
  }
  node.first_omitted_digit = first + static_cast<unsigned long>(max_children);
  const CylinderGeometry& last = kids.back().geometry;
  if (node.larger_digits_to_the_right) {
    node.omitted = std::make_pair(last.sup, node.geometry.sup);
    node.children = std::move(kids);
  } else {
    node.omitted = std::make_pair(node.geometry.inf, last.inf);
    node.children.assign(std::make_move_iterator(kids.rbegin()), std::make_move_iterator(kids.rend()));
  }
}

std::string label(const PrefixBase& base) {
  if (base.empty()) return "root";
  return "[" + format_digits(base.digits(), ",") + "]";
}

std::string bar(const Rational& lo, const Rational& hi, const CylinderGeometry& parent, int width) {
  auto column = [&](const Rational& x) {
    const Rational t = (x - parent.inf) / parent.diam * width;
    return static_cast<int>(floor_of(t).get_si());
  };
  int a = column(lo);
  int b = column(hi);
  if (b <= a) b = a + 1;
  if (b > width) b = width;
  std::string s(static_cast<std::size_t>(width), '.');
  for (int i = a; i < b; ++i) s[static_cast<std::size_t>(i)] = '#';
  return "|" + s + "|";
}

void emit_text(std::ostringstream& out, const DiagramNode& node, Representation rep, int indent) {
  if (node.children.empty()) return;
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  out << pad << "children of " << label(node.base) << ", larger digits to the "
      << (node.larger_digits_to_the_right ? "right" : "left") << ":\n";
  const std::string omitted_line = [&] {
    std::ostringstream o;
    o << pad << "  " << bar(node.omitted->first, node.omitted->second, node.geometry, 40) << " "
      << interval(rep, node.omitted->first, node.omitted->second) << "  digits >= " << node.first_omitted_digit
      << " not drawn\n";
    return o.str();
  }();
  if (!node.larger_digits_to_the_right) out << omitted_line;
  for (const auto& child : node.children) {
    out << pad << "  " << bar(child.geometry.inf, child.geometry.sup, node.geometry, 40) << " " << label(child.base)
        << " " << interval(rep, child.geometry.inf, child.geometry.sup) << "\n";
    emit_text(out, child, rep, indent + 2);
  }
  if (node.larger_digits_to_the_right) out << omitted_line;
}

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

struct SvgFrame {
  Rational inf;
  Rational diam;
  double width;
  double margin;
  double x(const Rational& v) const { return margin + Rational((v - inf) / diam).get_d() * width; }
};

void emit_svg(std::ostringstream& out, const DiagramNode& node, const SvgFrame& frame, int level, double row) {
  const double y = 40 + level * row;
  const double x0 = frame.x(node.geometry.inf);
  const double x1 = frame.x(node.geometry.sup);
  const bool odd = node.base.rank() % 2 == 1;
  out << "  <rect x=\"" << fixed(x0) << "\" y=\"" << fixed(y) << "\" width=\"" << fixed(x1 - x0) << "\" height=\""
      << fixed(row * 0.6) << "\" fill=\"" << (odd ? "#dbe8f6" : "#f3e3c8") << "\" stroke=\"#333\" stroke-width=\"0.5\"/>\n";
  if (x1 - x0 > 24) {
    out << "  <text x=\"" << fixed((x0 + x1) / 2) << "\" y=\"" << fixed(y + row * 0.4)
        << "\" font-size=\"10\" text-anchor=\"middle\">" << label(node.base) << "</text>\n";
  }
  if (x1 - x0 > 48) {
    out << "  <text x=\"" << fixed(x1) << "\" y=\"" << fixed(y + row * 0.6 + 11)
        << "\" font-size=\"9\" text-anchor=\"end\">" << to_string(node.geometry.sup) << "</text>\n";
  }
  for (const auto& child : node.children) emit_svg(out, child, frame, level + 1, row);
}

std::size_t tree_depth(const DiagramNode& node) {
  std::size_t d = 0;
  for (const auto& c : node.children) d = std::max(d, tree_depth(c) + 1);
  return d;
}

}  // namespace

DiagramNode build_diagram(const PrefixBase& base, const DiagramOptions& options) {
  if (options.depth > options.depth_cap) {
    throw OutOfDomain("diagram depth " + std::to_string(options.depth) + " exceeds the cap " +
                      std::to_string(options.depth_cap));
  }
  if (options.max_children == 0) throw OutOfDomain("at least one child per level must be drawn");
  DiagramNode root{base, geometry_of(options.rep, base), {}, std::nullopt, Integer(0), false};
  build(root, options.rep, options.depth, options.max_children);
  return root;
}

std::string render_text(const DiagramNode& root, const DiagramOptions& options) {
  std::ostringstream out;
  out << (options.rep == Representation::positive ? "P" : "P^-") << " cylinders of " << root.base.rule().name()
      << ", depth " << options.depth << "\n";
  out << label(root.base) << " " << interval(options.rep, root.geometry.inf, root.geometry.sup);
  if (options.rep == Representation::alternating && !root.base.empty()) {
    out << " minus IS, rank " << root.base.rank() << " (" << (root.base.rank() % 2 ? "odd" : "even") << ")";
  }
  out << "\n";
  emit_text(out, root, options.rep, 0);
  return out.str();
}

std::string render_svg(const DiagramNode& root, const DiagramOptions& options) {
  const double width = 900;
  const double margin = 30;
  const double row = 50;
  const std::size_t levels = tree_depth(root) + 1;
  const double height = 60 + static_cast<double>(levels) * row;
  const SvgFrame frame{root.geometry.inf, root.geometry.diam, width, margin};
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(width + 2 * margin) << "\" height=\""
      << fixed(height) << "\" font-family=\"monospace\">\n";
  out << "  <text x=\"" << fixed(margin) << "\" y=\"20\" font-size=\"12\">"
      << (options.rep == Representation::positive ? "P" : "P^-") << " cylinders of " << root.base.rule().name()
      << ", base " << label(root.base) << "</text>\n";
  out << "  <text x=\"" << fixed(margin) << "\" y=\"" << fixed(height - 6) << "\" font-size=\"9\">"
      << to_string(root.geometry.inf) << "</text>\n";
  emit_svg(out, root, frame, 0, row);
  out << "</svg>\n";
  return out.str();
}

}  // namespace perron::cli
