#pragma once

#include <string>
#include <vector>

namespace rotorlab::cli {

/// Shortest decimal string that reads back to the same double.
std::string format_double(double x);

/// Joins the formatted values with commas.
std::string csv_row(const std::vector<double>& values);

}  // namespace rotorlab::cli
