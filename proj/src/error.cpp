#include "jsat/error.hpp"

namespace jsat {

const char* errc_name(errc code) {
  switch (code) {
    case errc::all_missing: return "ALL_MISSING";
    case errc::parse_error: return "PARSE_ERROR";
    case errc::not_a_bed: return "NOT_A_BED";
    case errc::unsupported_mode: return "UNSUPPORTED_MODE";
    case errc::size_mismatch: return "SIZE_MISMATCH";
    case errc::imputed_not_serializable: return "IMPUTED_NOT_SERIALIZABLE";
    case errc::no_cases: return "NO_CASES";
    case errc::no_controls: return "NO_CONTROLS";
    case errc::insufficient_samples: return "INSUFFICIENT_SAMPLES";
    case errc::singular_covariance: return "SINGULAR_COVARIANCE";
    case errc::ld_infeasible: return "LD_INFEASIBLE";
    case errc::unknown_variant: return "UNKNOWN_VARIANT";
    case errc::invalid_argument: return "INVALID_ARGUMENT";
    case errc::io_error: return "IO_ERROR";
  }
  return "UNKNOWN";
}

}  // namespace jsat
