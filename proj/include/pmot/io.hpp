#pragma once

#include <iosfwd>
#include <string>

#include "pmot/measure.hpp"

namespace pmot {

// Text format: one atom per line, "birth death mass", whitespace separated.
// Lines starting with '#' and blank lines are ignored.
PersistenceMeasure load_measure(std::istream& in);
PersistenceMeasure load_measure_file(const std::string& path);

// Two-column variant "birth death" where every atom has mass 1.
PersistenceMeasure load_diagram(std::istream& in);
PersistenceMeasure load_diagram_file(const std::string& path);

// Accepts either format, decided by the first data line.
PersistenceMeasure load_measure_auto(std::istream& in);
PersistenceMeasure load_measure_auto_file(const std::string& path);

void save_measure(std::ostream& out, const PersistenceMeasure& mu);

// Shortest decimal form that round-trips to the same double.
std::string format_double(double x);

}  // namespace pmot
