#include "perron/int_map.hpp"

#include "perron/errors.hpp"

#include <numeric>

namespace perron {

namespace {

IntMap::Poly normalized(IntMap::Poly p) {
  while (p.size() > 1 && p.back() == 0) p.pop_back();
  if (p.empty()) p.emplace_back(0);
  return p;
}

std::string describe_poly(const IntMap::Poly& p) {
  std::string out;
  for (std::size_t d = p.size(); d-- > 0;) {
    const Integer& c = p[d];
    if (c == 0 && !(d == 0 && out.empty())) continue;
    if (!out.empty()) out += c < 0 ? " - " : " + ";
    const Integer mag = (!out.empty() && c < 0) ? Integer(-c) : c;
    if (d == 0) {
      out += mag.get_str();
    } else {
      if (mag != 1) out += mag.get_str() + "*";
      out += d == 1 ? "n" : "n^" + std::to_string(d);
    }
  }
  return out;
}

}  // namespace

std::uint64_t ResidueClass::first_at_least(std::uint64_t from) const {
  const std::uint64_t r = residue % modulus;
  const std::uint64_t base = from - from % modulus + r;
  return base >= from ? base : base + modulus;
}

std::string ResidueClass::describe() const {
  if (modulus == 1) return "all n";
  return "n = " + std::to_string(residue % modulus) + " (mod " + std::to_string(modulus) + ")";
}

IntMap::IntMap() : pieces_{Poly{Integer(0)}} {}

IntMap::IntMap(std::vector<Poly> pieces) {
  if (pieces.empty()) throw SchemaError("integer map needs at least one piece");
  for (auto& p : pieces) {
    p = normalized(std::move(p));
    for (std::size_t d = 1; d < p.size(); ++d) {
      if (p[d] < 0) throw SchemaError("integer map coefficients of degree >= 1 must be nonnegative");
    }
  }
  pieces_ = std::move(pieces);
}

IntMap IntMap::constant(Integer c) { return IntMap({Poly{std::move(c)}}); }

IntMap IntMap::affine(Integer a, Integer b) { return IntMap({Poly{std::move(b), std::move(a)}}); }

IntMap IntMap::polynomial(Poly coefficients) { return IntMap({std::move(coefficients)}); }

IntMap IntMap::cyclic(Integer base, std::uint64_t modulus) {
  if (modulus == 0) throw SchemaError("cyclic map modulus must be positive");
  std::vector<Poly> pieces;
  pieces.reserve(modulus);
  for (std::uint64_t i = 0; i < modulus; ++i) pieces.push_back(Poly{base + Integer(static_cast<unsigned long>(i))});
  return IntMap(std::move(pieces));
}

IntMap IntMap::interleave(const std::vector<IntMap>& maps) {
  std::vector<Poly> pieces;
  for (const auto& m : maps) {
    if (m.period() != 1) throw SchemaError("interleaved maps must be single-piece");
    pieces.push_back(m.pieces_.front());
  }
  return IntMap(std::move(pieces));
}

Integer IntMap::operator()(std::uint64_t n) const {
  const Poly& p = piece_for(n);
  Integer value = 0;
  const Integer x(static_cast<unsigned long>(n));
  for (std::size_t d = p.size(); d-- > 0;) value = value * x + p[d];
  return value;
}

std::optional<Integer> IntMap::constant_on(const ResidueClass& cls) const {
  if (cls.modulus % period() != 0) throw InvalidFamily("residue class is finer than the map period");
  const Poly& p = pieces_[cls.residue % period()];
  if (p.size() == 1) return p.front();
  return std::nullopt;
}

bool IntMap::tends_to_infinity() const {
  for (const auto& p : pieces_) {
    if (p.size() == 1) return false;
  }
  return true;
}

std::string IntMap::describe() const {
  if (pieces_.size() == 1) return describe_poly(pieces_.front());
  std::string out = "[";
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    if (i) out += "; ";
    out += "n%" + std::to_string(pieces_.size()) + "=" + std::to_string(i) + ": " + describe_poly(pieces_[i]);
  }
  return out + "]";
}

std::uint64_t lcm_period(std::uint64_t a, std::uint64_t b) { return std::lcm(a, b); }

}  // namespace perron
