#pragma once

#include "sbp/grid.hpp"

#include <string>

namespace sbp {

struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// BPF1 field file: "BPF1", u32le nx, ny, nz, f64le L, then nx*ny*nz
/// f64le values, row-major with x slowest. Round trips are bit-exact.
void write_field(const std::string& path, const ScalarField& u);
ScalarField read_field(const std::string& path);

}  // namespace sbp
