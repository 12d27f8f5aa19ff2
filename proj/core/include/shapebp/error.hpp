#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace shapebp {

enum class Errc {
  io_error,
  parse_error,
  non_finite_coordinate,
  unsupported_format,
  unsupported_fields,
  empty_cloud,
  unknown_class_id,
  length_mismatch,
  invalid_id,
  non_positive_radius,
  too_few_points,
  invalid_center_normal,
  empty_input,
  negative_value,
  no_valid_points,
  schema_mismatch,
  invariant_violation,
  insufficient_density,
  insufficient_points,
  no_model_found,
  bad_spec,
  invalid_argument,
};

std::string_view to_string(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace shapebp
