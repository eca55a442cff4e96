#include "perron/digit_rule.hpp"

#include "perron/errors.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <utility>

namespace perron {

namespace {

struct TemplateName {
  RuleTemplate kind;
  std::string_view name;
};

constexpr std::array<TemplateName, 5> kTemplateNames{{
    {RuleTemplate::constant, "constant"},
    {RuleTemplate::identity, "identity"},
    {RuleTemplate::minus_one, "minus-one"},
    {RuleTemplate::pronic, "pronic"},
    {RuleTemplate::scaled, "scaled"},
}};

Integer apply_template(const TemplateSpec& spec, const Integer& last) {
  switch (spec.kind) {
    case RuleTemplate::constant:
      return spec.parameter;
    case RuleTemplate::identity:
      return last;
    case RuleTemplate::minus_one:
      return last - 1;
    case RuleTemplate::pronic:
      return last * (last - 1);
    case RuleTemplate::scaled:
      return spec.parameter * last;
  }
  return spec.parameter;
}

bool same_template(const TemplateSpec& a, const TemplateSpec& b) {
  if (a.kind != b.kind) return false;
  const bool parametric = a.kind == RuleTemplate::constant || a.kind == RuleTemplate::scaled;
  return !parametric || a.parameter == b.parameter;
}

}  // namespace

std::string template_to_string(const TemplateSpec& spec) {
  for (const auto& t : kTemplateNames) {
    if (t.kind != spec.kind) continue;
    std::string out(t.name);
    const bool parametric = spec.kind == RuleTemplate::constant || spec.kind == RuleTemplate::scaled;
    if (parametric && !(spec.kind == RuleTemplate::constant && spec.parameter == 1)) {
      out += ":" + spec.parameter.get_str();
    }
    return out;
  }
  return "constant";
}

TemplateSpec template_from_string(std::string_view text) {
  const auto colon = text.find(':');
  const std::string_view head = text.substr(0, colon);
  for (const auto& t : kTemplateNames) {
    if (t.name != head) continue;
    TemplateSpec spec{t.kind, 1};
    if (colon != std::string_view::npos) {
      if (t.kind != RuleTemplate::constant && t.kind != RuleTemplate::scaled) {
        throw SchemaError("template '" + std::string(head) + "' takes no parameter");
      }
      spec.parameter = parse_integer(text.substr(colon + 1));
      if (spec.parameter < 1) throw SchemaError("template parameter must be >= 1");
    }
    return spec;
  }
  throw SchemaError("unknown rule template '" + std::string(text) + "'");
}

struct DigitRule::Impl {
  SystemDescriptor descriptor;
  std::map<std::vector<Integer>, Integer> table;
  std::size_t memoryless_from = 0;
};

DigitRule::DigitRule(SystemDescriptor descriptor) {
  if (descriptor.phi0 < 1) throw SchemaError("phi0 must be a positive integer");
  if (descriptor.rule.parameter < 1) throw SchemaError("template parameter must be >= 1");
  auto impl = std::make_shared<Impl>();
  for (const auto& entry : descriptor.table) {
    if (entry.prefix.empty()) throw SchemaError("table prefixes must be nonempty");
    if (entry.r < 1) throw SchemaError("table r-values must be positive integers");
    for (const auto& d : entry.prefix) {
      if (d < 1) throw SchemaError("table prefixes must contain positive integers");
    }
    if (!impl->table.emplace(entry.prefix, entry.r).second) {
      throw SchemaError("duplicate table prefix");
    }
    impl->memoryless_from = std::max(impl->memoryless_from, entry.prefix.size());
  }
  impl->descriptor = std::move(descriptor);
  impl_ = std::move(impl);
}

const std::string& DigitRule::name() const noexcept { return impl_->descriptor.name; }
const Integer& DigitRule::phi0() const noexcept { return impl_->descriptor.phi0; }
const SystemDescriptor& DigitRule::descriptor() const noexcept { return impl_->descriptor; }
std::size_t DigitRule::memoryless_from() const noexcept { return impl_->memoryless_from; }

Integer DigitRule::operator()(std::span<const Integer> prefix) const {
  if (prefix.empty()) return impl_->descriptor.phi0;
  if (!impl_->table.empty() && prefix.size() <= impl_->memoryless_from) {
    const std::vector<Integer> key(prefix.begin(), prefix.end());
    if (auto it = impl_->table.find(key); it != impl_->table.end()) return it->second;
  }
  return apply_template(impl_->descriptor.rule, prefix.back());
}

bool operator==(const DigitRule& a, const DigitRule& b) {
  if (a.impl_ == b.impl_) return true;
  const auto& da = a.impl_->descriptor;
  const auto& db = b.impl_->descriptor;
  return da.name == db.name && da.phi0 == db.phi0 && same_template(da.rule, db.rule) &&
         a.impl_->table == b.impl_->table;
}

DigitRule builtin(std::string_view name) {
  auto make = [&](RuleTemplate kind) {
    return DigitRule(SystemDescriptor{std::string(name), 1, TemplateSpec{kind, 1}, {}});
  };
  if (name == "luroth" || name == "alt-luroth") return make(RuleTemplate::constant);
  if (name == "engel") return make(RuleTemplate::minus_one);
  if (name == "sylvester") return make(RuleTemplate::pronic);
  if (name == "pierce") return make(RuleTemplate::identity);
  throw UnknownSystem("unknown system '" + std::string(name) + "'");
}

std::vector<std::string> builtin_names() {
  return {"luroth", "engel", "sylvester", "pierce", "alt-luroth"};
}

// ---------------------------------------------------------------------------

PrefixBase::PrefixBase(DigitRule rule) : rule_(std::move(rule)) {
  r_.push_back(rule_.phi0());
  weight_.emplace_back(1);
}

PrefixBase PrefixBase::validate(DigitRule rule, std::vector<Integer> digits) {
  PrefixBase base(std::move(rule));
  base.digits_.reserve(digits.size());
  base.r_.reserve(digits.size() + 1);
  base.weight_.reserve(digits.size() + 1);
  for (auto& d : digits) base.append(std::move(d));
  return base;
}

PrefixBase& PrefixBase::append(Integer digit) {
  const Integer minimum = r_.back() + 1;
  if (digit < minimum) throw InvalidDigit(digits_.size() + 1, std::move(digit), minimum);
  Rational w = weight_.back() * r_.back();
  w /= Rational(digit * (digit - 1));
  digits_.push_back(std::move(digit));
  weight_.push_back(std::move(w));
  Integer next = rule_(digits_);
  if (next < 1) throw SchemaError("rule produced a non-positive r-value");
  r_.push_back(std::move(next));
  return *this;
}

PrefixBase PrefixBase::extended(Integer digit) const {
  PrefixBase copy = *this;
  copy.append(std::move(digit));
  return copy;
}

PrefixBase PrefixBase::truncated(std::size_t rank) const {
  if (rank >= digits_.size()) return *this;
  PrefixBase copy(rule_);
  copy.digits_.assign(digits_.begin(), digits_.begin() + static_cast<std::ptrdiff_t>(rank));
  copy.r_.assign(r_.begin(), r_.begin() + static_cast<std::ptrdiff_t>(rank + 1));
  copy.weight_.assign(weight_.begin(), weight_.begin() + static_cast<std::ptrdiff_t>(rank + 1));
  return copy;
}

PrefixBase PrefixBase::with_last_digit(Integer digit) const {
  if (digits_.empty()) throw OutOfDomain("empty prefix has no last digit");
  return truncated(digits_.size() - 1).extended(std::move(digit));
}

bool operator==(const PrefixBase& a, const PrefixBase& b) {
  return a.digits_ == b.digits_ && a.rule_ == b.rule_;
}

Integer r_value(const PrefixBase& base) { return base.r(base.rank()); }

Integer min_next_digit(const PrefixBase& base) { return base.min_next_digit(); }

PrefixBase validate_prefix(std::vector<Integer> digits, const DigitRule& system) {
  return PrefixBase::validate(system, std::move(digits));
}

PrefixBase validate_prefix(std::initializer_list<long> digits, const DigitRule& system) {
  std::vector<Integer> v;
  v.reserve(digits.size());
  for (long d : digits) v.emplace_back(d);
  return PrefixBase::validate(system, std::move(v));
}

std::string format_digits(const std::vector<Integer>& digits, std::string_view separator) {
  std::string out;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (i) out += separator;
    out += digits[i].get_str();
  }
  return out;
}

}  // namespace perron
