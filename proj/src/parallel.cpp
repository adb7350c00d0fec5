#include "strainforge/parallel.hpp"

namespace strainforge {

unsigned default_thread_count() noexcept {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace strainforge
