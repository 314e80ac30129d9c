#pragma once

#include <stdexcept>
#include <string>

namespace superres {

/// Domain failure raised by any module.
///
/// `module()` names the raising module ("model", "pencil", ...), `name()` is
/// the short stable error name ("degenerate signal", "rank-deficient pencil")
/// that the CLI prints and tests match on. `what()` carries both plus detail.
class Error : public std::runtime_error {
 public:
  Error(std::string module, std::string name, const std::string& detail = {});

  const std::string& module() const noexcept { return module_; }
  const std::string& name() const noexcept { return name_; }
  const std::string& detail() const noexcept { return detail_; }

  /// Same error, with a stage label prefixed to the detail.
  Error with_stage(const std::string& stage) const;

 private:
  std::string module_;
  std::string name_;
  std::string detail_;
};

}  // namespace superres
