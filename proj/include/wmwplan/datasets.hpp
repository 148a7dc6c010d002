#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "wmwplan/planning.hpp"
#include "wmwplan/synthetic.hpp"

namespace wmwplan {

struct NamedExample {
  std::string name;
  std::string description;
  WeightedSample f1;
  WeightedSample f2;
  PlanInput defaults;
};

/// seizures, nasal, kidney, albumin, beta55_32.
std::vector<std::string> example_names();

/// The second group is always rebuilt from the first with the example's
/// effect generator. grid_size only affects beta55_32.
/// Throws std::invalid_argument listing the valid names on an unknown name.
NamedExample load_example(std::string_view name, std::size_t grid_size = 100000);

/// Tabulated example data.
namespace fixtures {

inline constexpr std::array<double, 28> seizures_placebo = {
    3, 3, 5, 4, 21, 7, 2, 12, 5, 0, 22, 4, 2, 12,
    9, 5, 3, 29, 5, 7, 4, 4, 5, 8, 25, 1, 2, 12};
inline constexpr std::array<double, 28> seizures_alternative = {
    1, 1, 2, 2, 10, 3, 1, 6, 2, 0, 11, 2, 1, 6,
    4, 2, 1, 14, 2, 3, 2, 2, 2, 4, 12, 0, 1, 6};
inline constexpr double seizures_reduction = 0.5;

inline constexpr std::array<double, 4> nasal_substance1 = {64, 12, 4, 0};
inline constexpr std::array<double, 4> nasal_substance2 = {48, 25, 6, 1};
inline constexpr double nasal_move_fraction = 0.25;

inline constexpr std::array<double, 8> kidney_placebo = {6.62, 6.65, 5.78, 5.63,
                                                         6.05, 6.48, 5.50, 5.37};
inline constexpr std::array<double, 8> kidney_treatment = {6.92, 6.95, 6.08, 5.93,
                                                           6.35, 6.78, 5.80, 5.67};
inline constexpr double kidney_shift_of_mean = 0.05;

inline constexpr std::array<double, 3> albumin_control = {0.85, 0.10, 0.05};
inline constexpr std::array<double, 3> albumin_experimental = {0.90, 0.075, 0.025};

}  // namespace fixtures

}  // namespace wmwplan
