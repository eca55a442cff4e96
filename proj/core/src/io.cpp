#include "perron/io.hpp"

#include "perron/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace perron {

namespace {

using json = nlohmann::json;

void only_keys(const json& j, std::initializer_list<std::string_view> allowed, std::string_view where) {
  if (!j.is_object()) throw SchemaError(std::string(where) + ": expected an object");
  const std::set<std::string_view> keys(allowed);
  for (const auto& [key, value] : j.items()) {
    if (!keys.count(key)) throw SchemaError(std::string(where) + ": unknown key '" + key + "'");
  }
}

const json& required(const json& j, const char* key, std::string_view where) {
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(std::string(where) + ": missing key '" + key + "'");
  return *it;
}

Integer as_integer(const json& j, std::string_view where) {
  if (j.is_number_integer()) {
    return j.is_number_unsigned() ? Integer(std::to_string(j.get<std::uint64_t>()))
                                  : Integer(std::to_string(j.get<std::int64_t>()));
  }
  if (j.is_string()) return parse_integer(j.get<std::string>());
  throw SchemaError(std::string(where) + ": expected an integer");
}

std::uint64_t as_count(const json& j, std::string_view where) {
  const Integer v = as_integer(j, where);
  if (v < 0 || !v.fits_ulong_p()) throw SchemaError(std::string(where) + ": expected a nonnegative count");
  return v.get_ui();
}

Rational as_rational(const json& j, std::string_view where) {
  if (j.is_number_integer()) return Rational(as_integer(j, where));
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw SchemaError(std::string(where) + ": expected a rational \"p/q\"");
}

std::vector<Integer> as_digits(const json& j, std::string_view where) {
  if (!j.is_array()) throw SchemaError(std::string(where) + ": expected an array of integers");
  std::vector<Integer> out;
  for (const auto& d : j) out.push_back(as_integer(d, where));
  return out;
}

json integer_json(const Integer& v) {
  if (v.fits_slong_p()) return v.get_si();
  return v.get_str();
}

IntMap int_map_from(const json& j, std::string_view where);

IntMap::Poly single_piece(const IntMap& m, std::string_view where) {
  if (m.period() != 1) throw SchemaError(std::string(where) + ": nested pieces must be single polynomials");
  return m.pieces().front();
}

IntMap int_map_from(const json& j, std::string_view where) {
  if (j.is_number_integer() || j.is_string()) return IntMap::constant(as_integer(j, where));
  if (!j.is_object() || j.size() != 1) {
    throw SchemaError(std::string(where) + ": integer map must be an integer or a one-key object");
  }
  const auto& [key, value] = *j.items().begin();
  if (key == "poly") return IntMap::polynomial(as_digits(value, where));
  if (key == "affine") {
    const auto ab = as_digits(value, where);
    if (ab.size() != 2) throw SchemaError(std::string(where) + ": affine takes [a, b] for a*n + b");
    return IntMap::affine(ab[0], ab[1]);
  }
  if (key == "cyclic") {
    const auto bm = as_digits(value, where);
    if (bm.size() != 2 || bm[1] < 1 || !bm[1].fits_ulong_p()) {
      throw SchemaError(std::string(where) + ": cyclic takes [base, modulus]");
    }
    return IntMap::cyclic(bm[0], bm[1].get_ui());
  }
  if (key == "pieces") {
    if (!value.is_array() || value.empty()) throw SchemaError(std::string(where) + ": pieces must be a nonempty array");
    std::vector<IntMap::Poly> pieces;
    for (const auto& p : value) pieces.push_back(single_piece(int_map_from(p, where), where));
    return IntMap(std::move(pieces));
  }
  throw SchemaError(std::string(where) + ": unknown integer map form '" + key + "'");
}

Tail tail_from(const json& j, std::string_view where) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "minimal") return minimal_tail();
    if (s == "unknown") return unknown_tail();
    throw SchemaError(std::string(where) + ": unknown tail '" + s + "'");
  }
  if (!j.is_object() || j.size() != 1) throw SchemaError(std::string(where) + ": tail must be a string or one-key object");
  const auto& [key, value] = *j.items().begin();
  if (key == "offset") return offset_tail(int_map_from(value, where));
  if (key == "digits") return absolute_tail(int_map_from(value, where));
  throw SchemaError(std::string(where) + ": unknown tail form '" + key + "'");
}

Tail optional_tail(const json& j, std::string_view where) {
  auto it = j.find("tail");
  return it == j.end() ? minimal_tail() : tail_from(*it, where);
}

std::uint64_t optional_n0(const json& j, std::string_view where) {
  auto it = j.find("n0");
  return it == j.end() ? 1 : std::max<std::uint64_t>(1, as_count(*it, where));
}

DigitStream stream_from(const json& j, Representation rep, const DigitRule& rule, std::string_view where) {
  if (j.contains("rational")) {
    only_keys(j, {"rational"}, where);
    const Rational x = as_rational(j["rational"], where);
    return rep == Representation::positive ? positive_stream_of(x, rule) : alternating_stream_of(x, rule);
  }
  only_keys(j, {"prefix", "tail"}, where);
  return DigitStream(PrefixBase::validate(rule, as_digits(required(j, "prefix", where), where)),
                     optional_tail(j, where));
}

SystemDescriptor descriptor_from(const json& j) {
  constexpr std::string_view where = "system descriptor";
  only_keys(j, {"name", "phi0", "template", "table"}, where);
  SystemDescriptor d;
  const auto& name = required(j, "name", where);
  if (!name.is_string()) throw SchemaError("system descriptor: name must be a string");
  d.name = name.get<std::string>();
  if (auto it = j.find("phi0"); it != j.end()) d.phi0 = as_integer(*it, where);
  const auto& tmpl = required(j, "template", where);
  if (!tmpl.is_string()) throw SchemaError("system descriptor: template must be a string");
  d.rule = template_from_string(tmpl.get<std::string>());
  if (auto it = j.find("table"); it != j.end()) {
    if (!it->is_array()) throw SchemaError("system descriptor: table must be an array");
    for (const auto& entry : *it) {
      only_keys(entry, {"prefix", "r"}, "table entry");
      d.table.push_back({as_digits(required(entry, "prefix", "table entry"), "table entry"),
                         as_integer(required(entry, "r", "table entry"), "table entry")});
    }
  }
  return d;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json(std::string_view text, std::string_view where) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string(where) + ": " + e.what());
  }
}

DigitRule system_from(const json& j, const std::filesystem::path& base_dir) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    const auto names = builtin_names();
    if (std::find(names.begin(), names.end(), s) != names.end()) return builtin(s);
    std::filesystem::path p(s);
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    return load_system(p.string());
  }
  return DigitRule(descriptor_from(j));
}

LimitTarget target_from(const json& j, Representation rep, const DigitRule& rule) {
  constexpr std::string_view where = "target";
  const auto& kind_j = required(j, "kind", where);
  if (!kind_j.is_string()) throw SchemaError("target: kind must be a string");
  const auto kind = kind_j.get<std::string>();
  auto base = [&] { return PrefixBase::validate(rule, as_digits(required(j, "base", where), where)); };
  if (kind == "zero") {
    only_keys(j, {"kind"}, where);
    return ZeroTarget{};
  }
  if (kind == "point") {
    only_keys(j, {"kind", "x0"}, where);
    DigitStream x0 = stream_from(required(j, "x0", where), rep, rule, "target x0");
    if (rep == Representation::positive) return InteriorPoint{std::move(x0)};
    return RegularPoint{std::move(x0)};
  }
  only_keys(j, {"kind", "base"}, where);
  if (kind == "supremum-of") {
    if (rep == Representation::positive) return SupremumOf{base()};
    return OddSupOf{base()};
  }
  if (kind == "infimum-of") {
    if (rep == Representation::positive) return InfimumOf{base()};
    return EvenInfOf{base()};
  }
  throw SchemaError("target: unknown kind '" + kind + "'");
}

SequenceFamily family_from(const json& j, const DigitRule& rule) {
  constexpr std::string_view where = "family";
  const auto& kind_j = required(j, "kind", where);
  if (!kind_j.is_string()) throw SchemaError("family: kind must be a string");
  const auto kind = kind_j.get<std::string>();
  if (kind == "prefix-then-digit") {
    only_keys(j, {"kind", "base", "digit", "tail", "n0"}, where);
    return prefix_then_digit(PrefixBase::validate(rule, as_digits(required(j, "base", where), where)),
                             int_map_from(required(j, "digit", where), where), optional_tail(j, where),
                             optional_n0(j, where));
  }
  if (kind == "first-digit") {
    only_keys(j, {"kind", "digit", "tail", "n0"}, where);
    return first_digit(int_map_from(required(j, "digit", where), where), optional_tail(j, where), optional_n0(j, where));
  }
  if (kind == "digits") {
    only_keys(j, {"kind", "digits", "tail", "n0"}, where);
    TemplateFamily f;
    const auto& maps = required(j, "digits", where);
    if (!maps.is_array()) throw SchemaError("family: digits must be an array of integer maps");
    for (const auto& m : maps) f.digits.push_back(int_map_from(m, where));
    f.tail = optional_tail(j, where);
    f.n0 = optional_n0(j, where);
    return f;
  }
  if (kind == "disagree") {
    only_keys(j, {"kind", "k", "delta", "tail", "n0"}, where);
    DisagreeFamily f;
    f.k = int_map_from(required(j, "k", where), where);
    if (auto it = j.find("delta"); it != j.end()) f.delta = int_map_from(*it, where);
    f.tail = optional_tail(j, where);
    f.n0 = optional_n0(j, where);
    return f;
  }
  if (kind == "explicit") {
    only_keys(j, {"kind", "values"}, where);
    const auto& values = required(j, "values", where);
    if (!values.is_array()) throw SchemaError("family: values must be an array of rationals");
    ExplicitFamily f;
    for (const auto& v : values) f.values.push_back(as_rational(v, where));
    return f;
  }
  throw SchemaError("family: unknown kind '" + kind + "'");
}

}  // namespace

SystemDescriptor parse_system_descriptor(std::string_view json_text) {
  return descriptor_from(parse_json(json_text, "system descriptor"));
}

std::string to_json(const SystemDescriptor& d) {
  json j;
  j["name"] = d.name;
  j["phi0"] = integer_json(d.phi0);
  j["template"] = template_to_string(d.rule);
  j["table"] = json::array();
  for (const auto& entry : d.table) {
    json prefix = json::array();
    for (const auto& c : entry.prefix) prefix.push_back(integer_json(c));
    j["table"].push_back({{"prefix", prefix}, {"r", integer_json(entry.r)}});
  }
  return j.dump(2);
}

DigitRule load_system(std::string_view name_or_path) {
  const auto names = builtin_names();
  if (std::find(names.begin(), names.end(), name_or_path) != names.end()) return builtin(name_or_path);
  const std::filesystem::path path(name_or_path);
  if (!std::filesystem::exists(path)) return builtin(name_or_path);  // throws UnknownSystem
  return DigitRule(parse_system_descriptor(read_file(path)));
}

Representation parse_representation(std::string_view text) {
  if (text == "P" || text == "p" || text == "positive") return Representation::positive;
  if (text == "Pminus" || text == "pminus" || text == "P-" || text == "alternating") return Representation::alternating;
  throw SchemaError("unknown representation '" + std::string(text) + "' (expected P or Pminus)");
}

ConvergenceSpec parse_convergence_spec(std::string_view json_text, const std::filesystem::path& base_dir) {
  constexpr std::string_view where = "convergence spec";
  const json j = parse_json(json_text, where);
  only_keys(j, {"version", "representation", "system", "target", "x0", "family", "samples"}, where);
  ConvergenceSpec spec;
  if (auto it = j.find("version"); it != j.end()) {
    spec.version = static_cast<int>(as_count(*it, where));
    if (spec.version != 1) throw SchemaError("convergence spec: unsupported version " + std::to_string(spec.version));
  }
  const auto& rep = required(j, "representation", where);
  if (!rep.is_string()) throw SchemaError("convergence spec: representation must be a string");
  spec.representation = parse_representation(rep.get<std::string>());
  spec.rule = system_from(required(j, "system", where), base_dir);
  const bool has_target = j.contains("target");
  const bool has_x0 = j.contains("x0");
  if (has_target == has_x0) throw SchemaError("convergence spec: give exactly one of 'target' and 'x0'");
  if (has_target) {
    spec.target = target_from(j["target"], spec.representation, spec.rule);
  } else {
    spec.two_sided_x0 = as_rational(j["x0"], where);
  }
  spec.family = family_from(required(j, "family", where), spec.rule);
  if (spec.two_sided_x0 && !std::holds_alternative<ExplicitFamily>(spec.family)) {
    throw SchemaError("convergence spec: a two-sided x0 needs an explicit family");
  }
  if (auto it = j.find("samples"); it != j.end()) {
    if (!it->is_array()) throw SchemaError("convergence spec: samples must be an array");
    for (const auto& n : *it) {
      const auto v = as_count(n, where);
      if (v < 1) throw SchemaError("convergence spec: sample indices start at 1");
      spec.samples.push_back(v);
    }
  }
  return spec;
}

ConvergenceSpec load_convergence_spec(const std::filesystem::path& path) {
  return parse_convergence_spec(read_file(path), path.parent_path());
}

IntMap parse_int_map(std::string_view json_text) { return int_map_from(parse_json(json_text, "integer map"), "integer map"); }

}  // namespace perron
