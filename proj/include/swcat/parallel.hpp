#pragma once

namespace swcat {

/// Thread count for the OpenMP kernels. Zero means the OpenMP default.
struct Parallelism {
  int threads = 0;
};

int resolve_threads(Parallelism p);

}  // namespace swcat
