#include "phav/error.hpp"

namespace phav {

void require_argument(bool cond, const std::string& what) {
    if (!cond) throw ArgumentError(what);
}

}  // namespace phav
