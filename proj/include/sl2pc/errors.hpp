#pragma once

#include <stdexcept>
#include <string>

namespace sl2pc {

enum class Errc {
  cross_check_fail,
  not_special_unitary,
  variance_mismatch,
  degree_overflow,
  numeric_coeff,
  not_poisson,
  no_convention_passes,
  origin_singularity,
  on_cone,
  not_unit,
  cone_point,
  singular_stencil,
  derivative_budget_exceeded,
  quadrature_nonconverged,
  tail_bound_unavailable,
  structure_mismatch,
  degree_cap,
  modular_disagreement,
  witness_not_closed,
  witness_not_independent,
  not_differentiable_input,
  division_by_zero_norm,
  division_fails,
  config_invalid,
  parse,
  check_failed,
};

inline const char* errc_name(Errc e) {
  switch (e) {
    case Errc::cross_check_fail: return "CROSS_CHECK_FAIL";
    case Errc::not_special_unitary: return "NOT_SPECIAL_UNITARY";
    case Errc::variance_mismatch: return "VARIANCE_MISMATCH";
    case Errc::degree_overflow: return "DEGREE_OVERFLOW";
    case Errc::numeric_coeff: return "NUMERIC_COEFF";
    case Errc::not_poisson: return "NOT_POISSON";
    case Errc::no_convention_passes: return "NO_CONVENTION_PASSES";
    case Errc::origin_singularity: return "ORIGIN_SINGULARITY";
    case Errc::on_cone: return "ON_CONE";
    case Errc::not_unit: return "NOT_UNIT";
    case Errc::cone_point: return "CONE_POINT";
    case Errc::singular_stencil: return "SINGULAR_STENCIL";
    case Errc::derivative_budget_exceeded: return "DERIVATIVE_BUDGET_EXCEEDED";
    case Errc::quadrature_nonconverged: return "QUADRATURE_NONCONVERGED";
    case Errc::tail_bound_unavailable: return "TAIL_BOUND_UNAVAILABLE";
    case Errc::structure_mismatch: return "STRUCTURE_MISMATCH";
    case Errc::degree_cap: return "DEGREE_CAP";
    case Errc::modular_disagreement: return "MODULAR_DISAGREEMENT";
    case Errc::witness_not_closed: return "WITNESS_NOT_CLOSED";
    case Errc::witness_not_independent: return "WITNESS_NOT_INDEPENDENT";
    case Errc::not_differentiable_input: return "NOT_DIFFERENTIABLE_INPUT";
    case Errc::division_by_zero_norm: return "DIVISION_BY_ZERO_NORM";
    case Errc::division_fails: return "DIVISION_FAILS";
    case Errc::config_invalid: return "CONFIG_INVALID";
    case Errc::parse: return "PARSE";
    case Errc::check_failed: return "CHECK_FAILED";
  }
  return "UNKNOWN";
}

class Error : public std::runtime_error {
 public:
  Error(Errc c, const std::string& what)
      : std::runtime_error(std::string(errc_name(c)) + ": " + what), code_(c) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace sl2pc
