#pragma once

#include <gtest/gtest.h>

#include "upq/matrix_kernel.hpp"

namespace upq::test {

inline double max_abs_diff(const CMatrix& a, const CMatrix& b) {
  if (a.size() == 0 && b.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

} // namespace upq::test
