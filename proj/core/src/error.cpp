#include "shapebp/error.hpp"

namespace shapebp {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::io_error: return "io-error";
    case Errc::parse_error: return "parse-error";
    case Errc::non_finite_coordinate: return "non-finite-coordinate";
    case Errc::unsupported_format: return "unsupported-format";
    case Errc::unsupported_fields: return "unsupported-fields";
    case Errc::empty_cloud: return "empty-cloud";
    case Errc::unknown_class_id: return "unknown-class-id";
    case Errc::length_mismatch: return "length-mismatch";
    case Errc::invalid_id: return "invalid-id";
    case Errc::non_positive_radius: return "non-positive-radius";
    case Errc::too_few_points: return "too-few-points";
    case Errc::invalid_center_normal: return "invalid-center-normal";
    case Errc::empty_input: return "empty-input";
    case Errc::negative_value: return "negative-value";
    case Errc::no_valid_points: return "no-valid-points";
    case Errc::schema_mismatch: return "schema-mismatch";
    case Errc::invariant_violation: return "invariant-violation";
    case Errc::insufficient_density: return "insufficient-density";
    case Errc::insufficient_points: return "insufficient-points";
    case Errc::no_model_found: return "no-model-found";
    case Errc::bad_spec: return "bad-spec";
    case Errc::invalid_argument: return "invalid-argument";
  }
  return "unknown";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace shapebp
