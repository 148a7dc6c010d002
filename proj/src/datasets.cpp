#include "wmwplan/datasets.hpp"

#include <stdexcept>

namespace wmwplan {

namespace {

WeightedSample unit_sample(std::span<const double> values) {
  return WeightedSample(std::vector<double>(values.begin(), values.end()));
}

NamedExample seizures() {
  NamedExample ex;
  ex.name = "seizures";
  ex.description = "Epilepsy trial placebo seizure counts; alternative halves every count (floor)";
  ex.f1 = unit_sample(fixtures::seizures_placebo);
  ex.f2 = scale_effect(ex.f1, fixtures::seizures_reduction, true);
  ex.defaults = {0.05, 0.8, BalancedAllocation{}};
  return ex;
}

NamedExample nasal() {
  NamedExample ex;
  ex.name = "nasal";
  ex.description =
      "Nasal mucosa defect scores 0-3; 25% of rats in scores 0-2 move one score up";
  ex.f1 = from_frequency_table(fixtures::nasal_substance1);
  const std::size_t moved[] = {0, 1, 2};
  ex.f2 = from_frequency_table(ordinal_shift(fixtures::nasal_substance1,
                                             fixtures::nasal_move_fraction, ShiftDirection::up,
                                             moved));
  ex.defaults = {0.05, 0.8, BalancedAllocation{}};
  return ex;
}

NamedExample kidney() {
  NamedExample ex;
  ex.name = "kidney";
  ex.description = "Relative kidney weights of male Wistar rats; shift by 5% of the placebo mean";
  ex.f1 = unit_sample(fixtures::kidney_placebo);
  ex.f2 = shift_effect(ex.f1, fixtures::kidney_shift_of_mean * ex.f1.mean(), 2);
  ex.defaults = {0.05, 0.8, BalancedAllocation{}};
  return ex;
}

NamedExample albumin() {
  NamedExample ex;
  ex.name = "albumin";
  ex.description = "Albuminuria (normal, micro, macro) expected frequencies, control vs experimental";
  ex.f1 = from_frequency_table(fixtures::albumin_control);
  ex.f2 = from_frequency_table(fixtures::albumin_experimental);
  ex.defaults = {0.05, 0.9, BalancedAllocation{}};
  return ex;
}

NamedExample beta55_32(std::size_t grid_size) {
  NamedExample ex;
  ex.name = "beta55_32";
  ex.description = "Beta(5,5) vs Beta(3,2) quantile grids";
  ex.f1 = quantile_grid([](double u) { return beta_quantile(5.0, 5.0, u); }, grid_size);
  ex.f2 = quantile_grid([](double u) { return beta_quantile(3.0, 2.0, u); }, grid_size);
  ex.defaults = {0.05, 0.8, BalancedAllocation{}};
  return ex;
}

}  // namespace

std::vector<std::string> example_names() {
  return {"seizures", "nasal", "kidney", "albumin", "beta55_32"};
}

NamedExample load_example(std::string_view name, std::size_t grid_size) {
  if (name == "seizures") return seizures();
  if (name == "nasal") return nasal();
  if (name == "kidney") return kidney();
  if (name == "albumin") return albumin();
  if (name == "beta55_32") return beta55_32(grid_size);

  std::string valid;
  for (const std::string& n : example_names()) valid += (valid.empty() ? "" : ", ") + n;
  throw std::invalid_argument("unknown example '" + std::string(name) + "' (valid: " + valid + ")");
}

}  // namespace wmwplan
