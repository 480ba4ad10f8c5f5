#pragma once

#include <stdexcept>
#include <string>

namespace reshare {

enum class Errc {
  invalid_scenario,
  infeasible_job,
  infeasible_request,
  index_out_of_scheme,
  budget_below_minimum,
  no_valid_range,
  unknown_request,
  empty_vm,
  instance_too_large,
  infeasible_instance,
  invalid_plan,
  parse_error,
  load_below_minimum,
  invariant_breach,
  io_error,
  usage_error,
};

const char* errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace reshare
