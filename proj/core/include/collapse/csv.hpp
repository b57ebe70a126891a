#pragma once

#include <initializer_list>
#include <ostream>
#include <string>
#include <vector>

#include "collapse/initial_data.hpp"

namespace collapse {

/// Round-trip formatting of a double ("%.17g", '.' decimal point).
std::string format_real(double v);

/// Minimal CSV emitter; reals use format_real, text cells are written as-is.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& os) : os_(os) {}
  void header(const std::vector<std::string>& names);
  void row(std::initializer_list<double> values);
  void row(const std::vector<double>& values);
  void text_row(const std::vector<std::string>& cells);

 private:
  std::ostream& os_;
};

/// One row per point: coord, r, dur, dvr, Q, A_u, m, re_phi, im_phi.
void write_cone_csv(std::ostream& os, const std::vector<double>& coords,
                    const std::vector<FieldPoint>& points);

/// Slice rows for streaming dumps: u, v, r, dur, dvr, ln_lapse, Q, A_u, m,
/// re_phi, im_phi, re_du_phi, im_du_phi.
void write_slice_header(std::ostream& os);
void write_slice_rows(std::ostream& os, double u, const std::vector<double>& v,
                      const std::vector<FieldPoint>& slice);

}  // namespace collapse
