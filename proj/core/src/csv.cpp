#include "collapse/csv.hpp"

#include <cstdio>

namespace collapse {

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void CsvWriter::header(const std::vector<std::string>& names) { text_row(names); }

void CsvWriter::row(std::initializer_list<double> values) { row(std::vector<double>(values)); }

void CsvWriter::row(const std::vector<double>& values) {
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (k) os_ << ',';
    os_ << format_real(values[k]);
  }
  os_ << '\n';
}

void CsvWriter::text_row(const std::vector<std::string>& cells) {
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (k) os_ << ',';
    os_ << cells[k];
  }
  os_ << '\n';
}

void write_cone_csv(std::ostream& os, const std::vector<double>& coords,
                    const std::vector<FieldPoint>& points) {
  CsvWriter csv(os);
  csv.header({"coord", "r", "dur", "dvr", "Q", "A_u", "m", "re_phi", "im_phi"});
  for (std::size_t k = 0; k < points.size(); ++k) {
    const FieldPoint& p = points[k];
    const double dvr = p.r > 0.0 ? p.dvr() : 0.5;
    csv.row({coords[k], p.r, p.dur, dvr, p.q, p.a_u, p.mass, p.phi.real(), p.phi.imag()});
  }
}

void write_slice_header(std::ostream& os) {
  CsvWriter(os).header({"u", "v", "r", "dur", "dvr", "ln_lapse", "Q", "A_u", "m", "re_phi", "im_phi",
                        "re_du_phi", "im_du_phi"});
}

void write_slice_rows(std::ostream& os, double u, const std::vector<double>& v,
                      const std::vector<FieldPoint>& slice) {
  CsvWriter csv(os);
  for (std::size_t j = 0; j < slice.size(); ++j) {
    const FieldPoint& p = slice[j];
    csv.row({u, v[j], p.r, p.dur, p.dvr(), p.ln_lapse, p.q, p.a_u, p.mass, p.phi.real(), p.phi.imag(),
             p.du_phi.real(), p.du_phi.imag()});
  }
}

}  // namespace collapse
