#ifndef JSAT_ERROR_HPP
#define JSAT_ERROR_HPP

#include <stdexcept>
#include <string>

namespace jsat {

enum class errc {
  all_missing,
  parse_error,
  not_a_bed,
  unsupported_mode,
  size_mismatch,
  imputed_not_serializable,
  no_cases,
  no_controls,
  insufficient_samples,
  singular_covariance,
  ld_infeasible,
  unknown_variant,
  invalid_argument,
  io_error,
};

const char* errc_name(errc code);

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  errc code() const { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw Error(code, what); }

}  // namespace jsat

#endif
