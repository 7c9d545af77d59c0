#include "lcs/error.hpp"

namespace lcs {

const char* to_string(IoErrc code) noexcept {
  switch (code) {
    case IoErrc::open_failed: return "open-failed";
    case IoErrc::malformed_header: return "malformed-header";
    case IoErrc::truncated_payload: return "truncated-payload";
    case IoErrc::dimension_overflow: return "dimension-overflow";
    case IoErrc::trailing_data: return "trailing-data";
    case IoErrc::write_failed: return "write-failed";
  }
  return "unknown";
}

}  // namespace lcs
