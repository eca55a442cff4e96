#include "perron_cli/cli.hpp"

#include "perron_cli/diagram.hpp"

#include <perron/alternating.hpp>
#include <perron/convergence.hpp>
#include <perron/errors.hpp>
#include <perron/io.hpp>
#include <perron/positive.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <ostream>
#include <sstream>

namespace perron::cli {

namespace {

std::string_view error_kind(const Error& e) {
  if (dynamic_cast<const UnknownSystem*>(&e)) return "UnknownSystem";
  if (dynamic_cast<const OutOfDomain*>(&e)) return "OutOfDomain";
  if (dynamic_cast<const GeneratorExhausted*>(&e)) return "GeneratorExhausted";
  if (dynamic_cast<const NoDisagreementUpToDepth*>(&e)) return "NoDisagreementUpToDepth";
  if (dynamic_cast<const SideMismatch*>(&e)) return "SideMismatch";
  if (dynamic_cast<const UnclassifiedTarget*>(&e)) return "UnclassifiedTarget";
  if (dynamic_cast<const InvalidFamily*>(&e)) return "InvalidFamily";
  if (dynamic_cast<const ElementEqualsTarget*>(&e)) return "ElementEqualsTarget";
  if (dynamic_cast<const NotExactlyEvaluable*>(&e)) return "NotExactlyEvaluable";
  if (dynamic_cast<const SplitUnnecessary*>(&e)) return "SplitUnnecessary";
  return "Error";
}

using json = nlohmann::json;

struct Globals {
  std::string system = "luroth";
  std::string rep = "p";
  std::string format = "fraction";
  int precision = 20;
  bool as_exact = false;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Context {
  Globals g;
  std::ostream& out;
  std::ostream& err;

  Representation rep() const {
    if (g.rep == "p" || g.rep == "P") return Representation::positive;
    if (g.rep == "pminus" || g.rep == "Pminus") return Representation::alternating;
    throw UsageError("--rep must be p or pminus");
  }
  bool json_output() const { return g.format == "json"; }
  std::string num(const Rational& v) const {
    if (g.format == "decimal") return to_decimal(v, g.precision);
    return to_string(v);
  }
  DigitRule rule() const { return load_system(g.system); }
};

Rational parse_value(const std::string& text, bool as_exact) {
  if (text.find_first_of(".eE") != std::string::npos) {
    if (!as_exact) throw UsageError("decimal literal '" + text + "' needs --as-exact (rational literals are p/q)");
    return parse_decimal_exact(text);
  }
  return parse_rational(text);
}

std::vector<Integer> parse_digit_args(const std::vector<std::string>& args) {
  std::vector<Integer> out;
  for (const auto& a : args) {
    std::stringstream ss(a);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!item.empty()) out.push_back(parse_integer(item));
    }
  }
  return out;
}

std::string digits_text(const PrefixBase& base) { return format_digits(base.digits(), " "); }

json digits_json(const PrefixBase& base) {
  json a = json::array();
  for (const auto& d : base.digits()) a.push_back(d.fits_slong_p() ? json(d.get_si()) : json(d.get_str()));
  return a;
}

std::string interval_text(const Context& c, const Rational& lo, const Rational& hi, Representation rep) {
  return "(" + c.num(lo) + ", " + c.num(hi) + (rep == Representation::positive ? "]" : ")");
}

// ------------------------------------------------------------ commands

int cmd_expand(Context& c, const std::string& x_text, std::size_t n) {
  const Rational x = parse_value(x_text, c.g.as_exact);
  const DigitRule rule = c.rule();
  const Representation rep = c.rep();
  json j{{"x", to_string(x)}, {"system", rule.name()}, {"representation", std::string(to_string(rep))}};
  std::ostringstream text;
  text << "x: " << c.num(x) << "\nsystem: " << rule.name() << " (" << to_string(rep) << ")\n";

  if (rep == Representation::positive) {
    const PrefixBase digits = digits_of(x, rule, n);
    const CylinderGeometry g = p_cylinder(digits);
    text << "digits: " << digits_text(digits) << "\n";
    text << "rank-" << n << " cylinder: " << interval_text(c, g.inf, g.sup, rep) << "\n";
    j["digits"] = digits_json(digits);
    j["enclosure"] = {{"inf", to_string(g.inf)}, {"sup", to_string(g.sup)}};
    const Orbit orbit = positive_orbit(x, rule, 256);
    if (orbit.end == Orbit::End::endpoint) {
      const PointClassP cls = classify_point_P(positive_stream_of(x, rule), 256);
      if (cls.kind == PointClassP::Kind::one) {
        text << "endpoint: x = 1, every digit is minimal\n";
        j["endpoint"] = json::array();
      } else {
        text << "endpoint: x = sup of (" << digits_text(*cls.witness) << "), digits after rank "
             << cls.witness->rank() << " are minimal\n";
        j["endpoint"] = digits_json(*cls.witness);
      }
    } else if (orbit.end == Orbit::End::cycle) {
      text << "periodic: digits repeat from position " << orbit.cycle_start + 1 << " with period "
           << orbit.cycle_length << "\n";
      j["period"] = {{"start", orbit.cycle_start + 1}, {"length", orbit.cycle_length}};
    }
  } else {
    auto result = pm_digits_of(x, rule, n);
    if (auto* m = std::get_if<ISMember>(&result)) {
      text << "IS member: x = sup of (" << digits_text(m->witness) << "), odd rank " << m->witness.rank()
           << "; x has no P^- digits\n";
      j["is_member"] = true;
      j["witness"] = digits_json(m->witness);
    } else {
      const auto& digits = std::get<PrefixBase>(result);
      const CylinderGeometry g = pm_cylinder(digits).geometry;
      text << "digits: " << digits_text(digits) << "\n";
      text << "rank-" << n << " cylinder: " << interval_text(c, g.inf, g.sup, rep) << "\n";
      j["digits"] = digits_json(digits);
      j["enclosure"] = {{"inf", to_string(g.inf)}, {"sup", to_string(g.sup)}};
      j["is_member"] = false;
      const ISResult is = is_member_IS(x, rule, 64);
      if (is.cycle()) {
        text << "IS: not a member, remainders repeat from step " << is.cycle()->cycle_start << " with period "
             << is.cycle()->cycle_length << "\n";
      } else {
        text << "IS: not a member up to depth 64\n";
      }
    }
  }
  c.out << (c.json_output() ? j.dump(2) + "\n" : text.str());
  return ok;
}

int cmd_cylinder(Context& c, const std::vector<std::string>& digit_args) {
  const DigitRule rule = c.rule();
  const Representation rep = c.rep();
  const PrefixBase base = validate_prefix(parse_digit_args(digit_args), rule);
  const CylinderGeometry g = rep == Representation::positive ? p_cylinder(base) : pm_cylinder(base).geometry;
  json j{{"base", digits_json(base)},
         {"system", rule.name()},
         {"representation", std::string(to_string(rep))},
         {"inf", to_string(g.inf)},
         {"sup", to_string(g.sup)},
         {"diam", to_string(g.diam)},
         {"rank", g.rank}};
  std::ostringstream text;
  text << "base: (" << digits_text(base) << ")  rank " << g.rank;
  if (rep == Representation::alternating) {
    const std::string parity = g.rank % 2 ? "odd" : "even";
    text << " (" << parity << ")";
    j["parity"] = parity;
  }
  text << "\ninf: " << c.num(g.inf) << "\nsup: " << c.num(g.sup) << "\ndiam: " << c.num(g.diam) << "\n";
  text << "set: " << interval_text(c, g.inf, g.sup, rep) << (rep == Representation::alternating ? " minus IS" : "")
       << "\n";
  c.out << (c.json_output() ? j.dump(2) + "\n" : text.str());
  return ok;
}

int report_is(Context& c, const Rational& x, const DigitRule& rule, std::size_t depth) {
  const ISResult is = is_member_IS(x, rule, depth);
  json j{{"x", to_string(x)}, {"system", rule.name()}};
  std::ostringstream text;
  if (auto* m = is.member()) {
    text << "Member: x = sup of (" << digits_text(m->witness) << "), odd rank " << m->witness.rank() << "\n";
    j["result"] = "Member";
    j["witness"] = digits_json(m->witness);
  } else if (auto* cyc = is.cycle()) {
    text << "NotMember: remainders repeat from step " << cyc->cycle_start << " with period " << cyc->cycle_length
         << ":";
    for (const auto& r : cyc->cycle_remainders) text << " " << c.num(r);
    text << "\n";
    j["result"] = "NotMember";
    j["cycle"] = {{"start", cyc->cycle_start}, {"length", cyc->cycle_length}};
  } else {
    const auto& up_to = std::get<ISNotMemberUpToDepth>(is.outcome);
    text << "NotMemberUpToDepth(" << up_to.depth << ")";
    if (up_to.size_limited) text << ": digit " << up_to.depth << " exceeds the digit size budget";
    text << "\n";
    j["result"] = "NotMemberUpToDepth";
    j["depth"] = up_to.depth;
    j["size_limited"] = up_to.size_limited;
  }
  c.out << (c.json_output() ? j.dump(2) + "\n" : text.str());
  return ok;
}

int cmd_is_member(Context& c, const std::string& x_text, std::size_t depth) {
  return report_is(c, parse_value(x_text, c.g.as_exact), c.rule(), depth);
}

int cmd_classify(Context& c, const std::string& x_text, const std::vector<std::string>& prefix,
                 const std::string& tail, std::size_t depth) {
  const DigitRule rule = c.rule();
  if (c.rep() == Representation::alternating) {
    if (x_text.empty()) throw UsageError("P^- classification needs a rational x");
    return report_is(c, parse_value(x_text, c.g.as_exact), rule, depth);
  }
  std::optional<DigitStream> stream;
  if (!x_text.empty()) {
    stream = positive_stream_of(parse_value(x_text, c.g.as_exact), rule);
  } else {
    const PrefixBase base = validate_prefix(parse_digit_args(prefix), rule);
    if (tail == "minimal") {
      stream.emplace(base, minimal_tail());
    } else if (tail == "unknown") {
      stream.emplace(base, unknown_tail());
    } else {
      stream.emplace(base, absolute_tail(parse_int_map(tail)));
    }
  }
  json j{{"stream", stream->describe()}, {"system", rule.name()}};
  std::ostringstream text;
  try {
    const PointClassP cls = classify_point_P(*stream, depth);
    switch (cls.kind) {
      case PointClassP::Kind::one:
        text << "One: every digit is minimal, x = 1\n";
        j["class"] = "One";
        break;
      case PointClassP::Kind::cylinder_supremum:
        text << "CylinderSupremum: x = sup of (" << digits_text(*cls.witness) << ") = " << c.num(cyl_sup(*cls.witness))
             << "\n";
        j["class"] = "CylinderSupremum";
        j["witness"] = digits_json(*cls.witness);
        break;
      case PointClassP::Kind::interior:
        text << "Interior" << (cls.conclusive ? "" : " (up to depth " + std::to_string(cls.depth) + ")") << "\n";
        j["class"] = "Interior";
        j["conclusive"] = cls.conclusive;
        break;
    }
  } catch (const Undetermined& e) {
    text << "Undetermined: " << e.what() << "\n";
    j["class"] = "Undetermined";
    c.out << (c.json_output() ? j.dump(2) + "\n" : text.str());
    return undetermined;
  }
  c.out << (c.json_output() ? j.dump(2) + "\n" : text.str());
  return ok;
}

json verdict_json(const ConvergenceVerdict& v) {
  json j{{"verdict", std::string(to_string(v.verdict))},
         {"proposition", std::string(to_string(v.proposition))},
         {"statement", std::string(statement(v.proposition))},
         {"reason", v.reason},
         {"evidence_holds", v.evidence_holds()}};
  if (v.witness) {
    j["witness"] = {{"modulus", v.witness->indices.modulus},
                    {"residue", v.witness->indices.residue},
                    {"start", v.witness->start},
                    {"gap", to_string(v.witness->gap)},
                    {"pattern", v.witness->pattern}};
  }
  j["evidence"] = json::array();
  for (const auto& r : v.evidence) {
    json row{{"n", r.n},
             {"distance_lower", to_string(r.distance_lower)},
             {"distance_upper", to_string(r.distance_upper)},
             {"exact", r.exact},
             {"note", r.note},
             {"holds", r.holds}};
    if (r.bound) row["bound"] = to_string(*r.bound);
    if (r.gap) row["gap"] = to_string(*r.gap);
    j["evidence"].push_back(std::move(row));
  }
  return j;
}

void verdict_text(const Context& c, std::ostream& out, const ConvergenceVerdict& v) {
  out << "proposition: " << to_string(v.proposition) << ": " << statement(v.proposition) << "\n";
  out << "verdict: " << to_string(v.verdict) << "\n";
  out << "reason: " << v.reason << "\n";
  if (v.witness) {
    out << "witness: n in " << v.witness->indices.describe() << ", n >= " << v.witness->start
        << ", |x_n - x0| >= " << c.num(v.witness->gap) << "\n";
  }
  if (v.evidence.empty()) return;
  out << "evidence:\n";
  for (const auto& r : v.evidence) {
    std::string dist = r.exact ? c.num(r.distance_lower)
                               : "[" + c.num(r.distance_lower) + ", " + c.num(r.distance_upper) + "]";
    out << "  n=" << r.n << "  |x_n - x0| " << (r.exact ? "= " : "in ") << dist;
    if (r.bound) out << "  <= bound " << c.num(*r.bound);
    if (r.gap) out << "  >= gap " << c.num(*r.gap);
    out << "  " << (r.holds ? "ok" : "VIOLATED");
    if (!r.note.empty()) out << "  (" << r.note << ")";
    out << "\n";
  }
}

int exit_for(Verdict v) {
  switch (v) {
    case Verdict::converges: return ok;
    case Verdict::diverges: return diverges;
    case Verdict::undetermined: return undetermined;
  }
  return undetermined;
}

int cmd_converge(Context& c, const std::string& path) {
  const ConvergenceSpec spec = load_convergence_spec(path);
  DecideOptions options;
  options.samples = spec.samples;
  std::ostringstream text;
  json j{{"representation", std::string(to_string(spec.representation))}, {"system", spec.rule.name()}};
  text << "representation: " << to_string(spec.representation) << "\nsystem: " << spec.rule.name() << "\n";
  text << "family: " << describe(spec.family) << "\n";

  int code = ok;
  if (spec.two_sided_x0) {
    const auto& family = std::get<ExplicitFamily>(spec.family);
    const SplitReport report = decide_two_sided(spec.representation, spec.rule, family, *spec.two_sided_x0, options);
    text << "x0: " << c.num(*spec.two_sided_x0) << " (two-sided)\n";
    j["x0"] = to_string(*spec.two_sided_x0);
    auto side = [&](const char* name, const SplitSide& s, const std::optional<ConvergenceVerdict>& v) {
      text << name << " side: " << s.values.size() << " elements";
      if (s.target) text << ", target " << describe(*s.target);
      text << "\n";
      json sj{{"count", s.values.size()}};
      if (s.target) sj["target"] = describe(*s.target);
      if (v) {
        verdict_text(c, text, *v);
        sj["report"] = verdict_json(*v);
      }
      j[name] = sj;
    };
    side("left", report.split.left, report.left);
    side("right", report.split.right, report.right);
    text << "verdict: Undetermined (finite list)\n";
    j["verdict"] = "Undetermined";
    code = undetermined;
  } else {
    const ConvergenceVerdict v = decide(spec.representation, spec.rule, *spec.target, spec.family, options);
    text << "target: " << describe(*spec.target) << "\n";
    verdict_text(c, text, v);
    j["target"] = describe(*spec.target);
    j.update(verdict_json(v));
    code = exit_for(v.verdict);
  }
  c.out << (c.json_output() ? j.dump(2) + "\n" : text.str());
  return code;
}

int cmd_diagram(Context& c, const std::vector<std::string>& base_args, std::size_t depth, std::size_t cap,
                std::size_t children) {
  const DigitRule rule = c.rule();
  std::vector<std::string> args = base_args;
  if (args.size() == 1 && args.front() == "root") args.clear();
  const PrefixBase base = validate_prefix(parse_digit_args(args), rule);
  DiagramOptions options{c.rep(), depth, cap, children};
  const DiagramNode root = build_diagram(base, options);
  if (c.g.format == "svg") {
    c.out << render_svg(root, options);
  } else if (c.g.format == "text" || c.g.format == "fraction") {
    c.out << render_text(root, options);
  } else {
    throw UsageError("diagram --format must be text or svg");
  }
  return ok;
}

int cmd_systems(Context& c, const std::string& show) {
  if (!show.empty()) {
    c.out << to_json(load_system(show).descriptor()) << "\n";
    return ok;
  }
  json j = json::array();
  std::ostringstream text;
  for (const auto& name : builtin_names()) {
    const DigitRule rule = builtin(name);
    const auto& d = rule.descriptor();
    text << name << "  phi0=" << d.phi0.get_str() << "  template=" << template_to_string(d.rule) << "\n";
    j.push_back({{"name", name}, {"phi0", d.phi0.get_si()}, {"template", template_to_string(d.rule)}});
  }
  c.out << (c.json_output() ? j.dump(2) + "\n" : text.str());
  return ok;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Context c{Globals{}, out, err};
  CLI::App app{"Exact positive and alternating Perron expansions", "perron"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--system", c.g.system, "builtin system name or JSON descriptor file")->capture_default_str();
  app.add_option("--rep", c.g.rep, "representation: p or pminus")->capture_default_str();
  app.add_option("--format", c.g.format, "fraction, decimal or json (text or svg for diagram)")->capture_default_str();
  app.add_option("--precision", c.g.precision, "fractional digits for decimal output")->capture_default_str();
  app.add_flag("--as-exact", c.g.as_exact, "accept decimal literals as exact rationals");

  std::string x_text;
  std::size_t n = 8;
  auto* expand = app.add_subcommand("expand", "digits of a rational and the enclosing cylinder");
  expand->add_option("x", x_text, "rational p/q")->required();
  expand->add_option("-n", n, "number of digits")->capture_default_str();

  std::vector<std::string> digit_args;
  auto* cylinder = app.add_subcommand("cylinder", "infimum, supremum and diameter of a cylinder");
  cylinder->add_option("digits", digit_args, "digits c1 ... ck")->required();

  std::vector<std::string> prefix;
  std::string tail = "minimal";
  std::size_t depth = 64;
  auto* classify = app.add_subcommand("classify", "interior point, cylinder supremum or IS membership");
  classify->add_option("x", x_text, "rational p/q");
  classify->add_option("--prefix", prefix, "digit prefix instead of x");
  classify->add_option("--tail", tail, "minimal, unknown or an integer map of positions")->capture_default_str();
  classify->add_option("--depth", depth, "inspection depth")->capture_default_str();

  auto* is_member = app.add_subcommand("is-member", "membership of a rational in IS (P^- endpoints)");
  is_member->add_option("x", x_text, "rational p/q")->required();
  is_member->add_option("--max-depth", depth, "digits to extract before giving up")->capture_default_str();

  std::string spec_path;
  auto* converge = app.add_subcommand("converge", "decide convergence from a JSON spec");
  converge->add_option("spec", spec_path, "convergence spec file")->required();

  std::vector<std::string> base_args;
  std::size_t diagram_depth = 1;
  std::size_t depth_cap = 4;
  std::size_t max_children = 8;
  auto* diagram = app.add_subcommand("diagram", "nested cylinder diagram (text or svg)");
  diagram->add_option("base", base_args, "root or digits c1 ... ck");
  diagram->add_option("--depth", diagram_depth, "levels of children")->capture_default_str();
  diagram->add_option("--depth-cap", depth_cap, "largest allowed depth")->capture_default_str();
  diagram->add_option("--max-children", max_children, "widest children drawn per cylinder")->capture_default_str();

  std::string show;
  auto* systems = app.add_subcommand("systems", "list builtin systems");
  systems->add_option("--show", show, "print the JSON descriptor of a system");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : usage;
  }

  try {
    if (*expand) return cmd_expand(c, x_text, n);
    if (*cylinder) return cmd_cylinder(c, digit_args);
    if (*classify) return cmd_classify(c, x_text, prefix, tail, depth);
    if (*is_member) return cmd_is_member(c, x_text, depth);
    if (*converge) return cmd_converge(c, spec_path);
    if (*diagram) return cmd_diagram(c, base_args, diagram_depth, depth_cap, max_children);
    if (*systems) return cmd_systems(c, show);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return usage;
  } catch (const SchemaError& e) {
    err << "error: SchemaError: " << e.what() << "\n";
    return usage;
  } catch (const InvalidDigit& e) {
    err << "error: InvalidDigit index " << e.index() << ": " << e.what() << "\n";
    return domain_error;
  } catch (const Undetermined& e) {
    err << "undetermined: " << e.what() << "\n";
    return undetermined;
  } catch (const Error& e) {
    err << "error: " << error_kind(e) << ": " << e.what() << "\n";
    return domain_error;
  }
  return usage;
}

}  // namespace perron::cli
