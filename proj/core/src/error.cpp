#include "superres/error.hpp"

namespace superres {
namespace {

std::string compose(const std::string& module, const std::string& name,
                    const std::string& detail) {
  std::string msg = "[" + module + "] " + name;
  if (!detail.empty()) msg += ": " + detail;
  return msg;
}

}  // namespace

Error::Error(std::string module, std::string name, const std::string& detail)
    : std::runtime_error(compose(module, name, detail)),
      module_(std::move(module)),
      name_(std::move(name)),
      detail_(detail) {}

Error Error::with_stage(const std::string& stage) const {
  return Error(module_, name_, "stage " + stage + (detail_.empty() ? "" : ": " + detail_));
}

}  // namespace superres
