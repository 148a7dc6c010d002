#pragma once

#include <cstddef>
#include <vector>

#include "wmwplan/wmw_test.hpp"

namespace wmwplan::detail {

struct PooledObservation {
  double value;
  bool second_group;
};

// Asymptotic WMW test on a pooled buffer; reorders the buffer in place.
TestResult wmw_test_pooled(std::vector<PooledObservation>& pooled, std::size_t n1, std::size_t n2,
                           double alpha);

}  // namespace wmwplan::detail
