#pragma once

// JSON documents: system descriptors and convergence specs. The schemas are
// described in docs/schemas.md; unknown keys are rejected with SchemaError.

#include "perron/convergence.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace perron {

SystemDescriptor parse_system_descriptor(std::string_view json_text);
std::string to_json(const SystemDescriptor& descriptor);

/// A builtin name, or a path to a JSON system descriptor.
DigitRule load_system(std::string_view name_or_path);

Representation parse_representation(std::string_view text);

struct ConvergenceSpec {
  int version = 1;
  Representation representation = Representation::positive;
  DigitRule rule = builtin("luroth");
  /// Unset for two-sided specs, which carry only x0.
  std::optional<LimitTarget> target;
  std::optional<Rational> two_sided_x0;
  SequenceFamily family;
  std::vector<std::uint64_t> samples;
};

/// Relative system paths resolve against `base_dir`.
ConvergenceSpec parse_convergence_spec(std::string_view json_text, const std::filesystem::path& base_dir = {});
ConvergenceSpec load_convergence_spec(const std::filesystem::path& path);

/// Integer maps in the textual JSON form, e.g. "3", {"affine":[1,2]}.
IntMap parse_int_map(std::string_view json_text);

}  // namespace perron
