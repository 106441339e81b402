#pragma once

#include <stdexcept>
#include <string>

namespace ttdbeam {

// Error categories. The CLI maps each one onto a process exit code.
enum class Errc {
  invalid_argument,
  dimension_mismatch,
  io,
  incompatible,
  parse,
  corrupt_file,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

namespace detail {

inline void require(bool cond, Errc code, const char* what) {
  if (!cond) throw Error(code, what);
}

inline void require(bool cond, Errc code, const std::string& what) {
  if (!cond) throw Error(code, what);
}

}  // namespace detail
}  // namespace ttdbeam
