#pragma once

#include <mutex>

namespace fracsum::detail {

// FFTW's planner is not reentrant; every plan create/destroy goes through this.
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace fracsum::detail
